#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "perclab/expansion.hpp"

using namespace perclab;

namespace {

Graph two_triangles() { return Graph(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}}); }

}  // namespace

TEST(PhiExact, SmallExamples) {
  EXPECT_DOUBLE_EQ(phi_exact(named::complete(4), 0.25).value, 2.0);
  EXPECT_DOUBLE_EQ(phi_exact(two_triangles(), 0.3).value, 0.0);
  const auto c8 = phi_exact(named::cycle(8), 0.25);
  EXPECT_DOUBLE_EQ(c8.value, 0.5);
  EXPECT_EQ(c8.boundary, 2u);
  EXPECT_EQ(c8.witness.size(), 4u);
}

TEST(PhiExact, Errors) {
  EXPECT_THROW(phi_exact(named::path(21), 0.1), SizeError);
  EXPECT_THROW(phi_exact(named::path(3), 0.45), ParameterError);
  EXPECT_THROW(phi_exact(named::path(4), 0.0), ParameterError);
  EXPECT_THROW(phi_exact(named::path(4), 0.5), ParameterError);
}

TEST(PhiExact, MatchesOracleOnRandomGraphs) {
  Rng rng(2024);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 4 + rng.below(11);
    const Graph g = oracle::random_graph(n, 0.35, rng);
    for (double eps : {0.1, 0.25, 0.4}) {
      if (std::ceil(eps * static_cast<double>(n)) > static_cast<double>(n / 2)) continue;
      const auto r = phi_exact(g, eps);
      EXPECT_EQ(r.value, oracle::expansion(g, eps));
      std::size_t cut = 0;
      std::vector<bool> in(n, false);
      for (Vertex v : r.witness) in[v] = true;
      for (const auto& e : g.edges()) cut += in[e.u] != in[e.v];
      EXPECT_EQ(cut, r.boundary);
    }
  }
}

TEST(PhiExact, NondecreasingInEpsilon) {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Graph g = oracle::random_graph(14, 0.3, rng);
    double prev = -1.0;
    for (double eps : {0.05, 0.1, 0.2, 0.3, 0.4, 0.49}) {
      const double v = phi_exact(g, eps).value;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(Spectral, CompleteGraphLambda2) {
  for (std::size_t n : {4u, 7u, 12u}) {
    const auto c = spectral_certificate(named::complete(n));
    EXPECT_TRUE(c.connected);
    EXPECT_NEAR(c.lambda2, static_cast<double>(n) / static_cast<double>(n - 1), 1e-4) << n;
  }
}

TEST(Spectral, CycleLambda2) {
  const auto c = spectral_certificate(named::cycle(8));
  EXPECT_NEAR(c.lambda2, 1.0 - std::cos(2.0 * std::numbers::pi / 8.0), 1e-4);
}

TEST(Spectral, DisconnectedGivesZero) {
  const auto c = spectral_certificate(two_triangles());
  EXPECT_FALSE(c.connected);
  EXPECT_EQ(c.lambda2, 0.0);
  EXPECT_EQ(c.expansion_lower, 0.0);
}

TEST(Sweep, BarbellFindsOneClique) {
  const Graph b = named::barbell(5);
  const auto s = sweep_upper(b, 0.3);
  EXPECT_DOUBLE_EQ(s.value, 0.2);
  const bool left = s.witness == std::vector<Vertex>{0, 1, 2, 3, 4};
  const bool right = s.witness == std::vector<Vertex>{5, 6, 7, 8, 9};
  EXPECT_TRUE(left || right);
  EXPECT_DOUBLE_EQ(phi_exact(b, 0.3).value, 0.2);
}

TEST(Sweep, CompleteGraph) { EXPECT_DOUBLE_EQ(sweep_upper(named::complete(4), 0.25).value, 2.0); }

TEST(Sandwich, HoldsOnRandomGraphs) {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 6 + rng.below(11);
    const Graph g = oracle::random_graph(n, 0.45, rng);
    const double eps = 0.2;
    const double exact = oracle::expansion(g, eps);
    const auto cert = spectral_certificate(g);
    EXPECT_LE(cert.expansion_lower, exact + 1e-9);
    EXPECT_GE(sweep_upper(g, eps).value, exact);
  }
}

TEST(Verdict, AverageDegreeTooHigh) {
  const auto r = is_large_set_expander(named::complete(6), 0.5, 0.25, 4.0);
  EXPECT_EQ(r.verdict, Verdict::kCertifiedNo);
}

TEST(Verdict, CompleteGraphCertifiedYes) {
  const auto r = is_large_set_expander(named::complete(4), 1.0, 0.25, 3.0);
  EXPECT_EQ(r.verdict, Verdict::kCertifiedYes);
  ASSERT_TRUE(r.exact.has_value());
  EXPECT_DOUBLE_EQ(*r.exact, 2.0);
}

TEST(Verdict, LongCycleCertifiedNo) {
  const auto r = is_large_set_expander(named::cycle(100), 0.5, 0.1, 2.0);
  EXPECT_EQ(r.verdict, Verdict::kCertifiedNo);
  EXPECT_FALSE(r.exact.has_value());
  EXPECT_LE(r.sweep_upper, 0.2);
}

TEST(Verdict, ExactBelowAlphaIsNo) {
  const auto r = is_large_set_expander(named::barbell(5), 0.3, 0.3, 10.0);
  EXPECT_EQ(r.verdict, Verdict::kCertifiedNo);
}

TEST(Verdict, EpsilonGridOneReportEach) {
  const auto reps = certify_epsilon_grid(named::complete(8), 1.0, {0.1, 0.2, 0.4}, 7.0);
  ASSERT_EQ(reps.size(), 3u);
  for (const auto& r : reps) EXPECT_EQ(r.verdict, Verdict::kCertifiedYes);
  EXPECT_EQ(reps[2].epsilon, 0.4);
}
