#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "perclab/polya.hpp"

using namespace perclab;
using namespace perclab::polya;

TEST(PolyaTree, RootPositionLawIsXSquared) {
  const std::size_t samples = 100000;
  std::vector<double> xs;
  xs.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) xs.push_back(sample_polya_tree(2, 0, derive_seed(3, Stream::kTree, s)).nodes[0].x);
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double cdf = xs[i] * xs[i];
    ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / samples), std::abs(cdf - static_cast<double>(i + 1) / samples)});
  }
  EXPECT_LT(ks, 0.01);
}

TEST(PolyaTree, LeftChildCountsAndPositions) {
  for (std::size_t m : {2u, 3u}) {
    const Tree t = sample_polya_tree(m, 3, 11);
    std::vector<std::size_t> left(t.nodes.size(), 0);
    for (std::size_t i = 1; i < t.nodes.size(); ++i) {
      const Node& c = t.nodes[i];
      const Node& parent = t.nodes[c.parent];
      EXPECT_EQ(c.depth, parent.depth + 1);
      if (c.kind == Kind::kLeft) {
        ++left[c.parent];
        EXPECT_LE(c.x, parent.x);
      } else {
        EXPECT_EQ(c.kind, Kind::kRight);
        EXPECT_GE(c.x, parent.x);
      }
    }
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      if (t.nodes[i].depth < 3) EXPECT_EQ(left[i], left_children(t.nodes[i].kind, m));
    }
  }
}

TEST(PolyaTree, RightChildMean) {
  Rng rng(8);
  const int draws = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    bool overflow = false;
    const double c = static_cast<double>(detail::sample_right_count(Kind::kRight, 0.5, 2, rng, overflow));
    sum += c;
    sq += c * c;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sq / draws - mean * mean) / draws);
  EXPECT_NEAR(mean, 2.0, 4.0 * se);
}

TEST(DegreePmf, SumsToOneAndHandValue) {
  double total = 0.0;
  for (std::size_t k = 0; k < 400; ++k) total += neg_binom_degree_pmf(2, Kind::kLeft, 0.3, 0.6, k);
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(neg_binom_degree_pmf(2, Kind::kLeft, 0.5, 0.5, 0), 8.0 / 27.0, 1e-14);
  EXPECT_DOUBLE_EQ(neg_binom_degree_pmf(3, Kind::kRight, 0.2, 0.0, 0), 1.0);
  EXPECT_THROW(neg_binom_degree_pmf(2, Kind::kRoot, 0.0, 0.5, 0), DomainError);
  EXPECT_THROW(neg_binom_degree_pmf(2, Kind::kRoot, 1.5, 0.5, 0), DomainError);
}

TEST(DegreePmf, MatchesSamplerMean) {
  Rng rng(19);
  const int draws = 200000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) sum += static_cast<double>(sample_percolated_right_degree(2, Kind::kRoot, 0.4, 0.5, rng));
  double mean = 0.0;
  for (std::size_t k = 0; k < 500; ++k) mean += static_cast<double>(k) * neg_binom_degree_pmf(2, Kind::kRoot, 0.4, 0.5, k);
  // Root shape 2, q = 0.4 / 0.7, mean 2 (1-q)/q = 1.5.
  EXPECT_NEAR(mean, 1.5, 1e-10);
  EXPECT_NEAR(sum / draws, mean, 0.02);
}

TEST(Operator, ZeroAndOnesInputs) {
  const auto z = phi_apply(ones_table(2, 0.0));
  for (std::size_t i = 0; i < z.x.size(); ++i) {
    EXPECT_EQ(z.rho_left[i], 0.0);
    EXPECT_EQ(z.rho_right[i], 0.0);
  }
  const double p = 0.3;
  const auto one = phi_apply(ones_table(2, p));
  EXPECT_NEAR(one.rho_right.back(), p, 1e-12);
  EXPECT_NEAR(one.rho_left.back(), 1.0 - (1.0 - p) * (1.0 - p), 1e-12);
}

TEST(Solver, Extremes) {
  const auto full = solve_rho(2, 1.0);
  EXPECT_TRUE(full.converged);
  EXPECT_EQ(full.iterations, 1u);
  for (std::size_t i = 0; i < full.x.size(); ++i) EXPECT_EQ(full.rho_right[i], 1.0);
  const auto none = solve_rho(2, 0.0);
  EXPECT_TRUE(none.converged);
  for (std::size_t i = 0; i < none.x.size(); ++i) EXPECT_EQ(none.rho_left[i], 0.0);
  EXPECT_EQ(zeta_of_p(none), 0.0);
  EXPECT_EQ(zeta_of_p(full), 1.0);
}

TEST(Solver, RejectsCoarseGrid) {
  SolveOptions opt;
  opt.grid.cells = 100;
  EXPECT_THROW(solve_rho(2, 0.3, opt), ParameterError);
  EXPECT_THROW(solve_rho(1, 0.3), ParameterError);
}

TEST(Solver, FixedPointResidualAndEnvelope) {
  const auto t = solve_rho(2, 0.3);
  EXPECT_TRUE(t.converged);
  EXPECT_LT(t.residual, 1e-8);
  const double z = zeta_of_p(t);
  const auto b = zeta_bounds(2, 0.3);
  EXPECT_GE(z, b.lower);
  EXPECT_LE(z, b.upper);
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    EXPECT_LE(t.rho_right[i], t.rho_left[i] + 1e-12);
    EXPECT_GE(t.rho_left[i], 0.0);
    EXPECT_LE(t.rho_left[i], 1.0);
  }
  const auto root = phi_root(t);
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    EXPECT_LE(t.rho_right[i], root[i] + 1e-12);
    EXPECT_LE(root[i], t.rho_left[i] + 1e-12);
  }
}

TEST(Solver, IterationIsMonotoneFromOnes) {
  auto t = ones_table(3, 0.25);
  for (int k = 0; k < 30; ++k) {
    const auto next = phi_apply(t);
    for (std::size_t i = 0; i < t.x.size(); ++i) {
      ASSERT_LE(next.rho_left[i], t.rho_left[i] + 1e-15);
      ASSERT_LE(next.rho_right[i], t.rho_right[i] + 1e-15);
    }
    t = next;
  }
}

TEST(Solver, ZetaMonotoneInP) {
  double prev = 0.0;
  for (double p : {0.05, 0.1, 0.2, 0.3, 0.45}) {
    const double z = zeta_of_p(solve_rho(2, p));
    EXPECT_GT(z, prev);
    prev = z;
  }
}

TEST(Solver, GridRefinementStable) {
  SolveOptions coarse;
  coarse.grid.cells = 1024;
  SolveOptions fine;
  fine.grid.cells = 4096;
  const double a = zeta_of_p(solve_rho(2, 0.3, coarse));
  const double b = zeta_of_p(solve_rho(2, 0.3, fine));
  EXPECT_NEAR(a, b, 1e-4);
}

TEST(Solver, ZetaKDecreasesToZeta) {
  const double z = zeta_of_p(solve_rho(2, 0.3));
  double prev = 1.0;
  for (std::size_t k = 0; k <= 6; ++k) {
    const double zk = zeta_k(2, 0.3, k);
    EXPECT_LE(zk, prev + 1e-15);
    EXPECT_GE(zk, z - 1e-12);
    prev = zk;
  }
}

TEST(Bounds, ClosedFormsAtTenPercent) {
  const auto b = zeta_bounds(2, 0.1);
  EXPECT_NEAR(b.lower, std::exp(-10.0), 1e-18);
  EXPECT_NEAR(b.upper_raw, 4.0 * std::exp(-8.0 / 3.0), 1e-14);
  EXPECT_FALSE(b.vacuous);
  EXPECT_THROW(zeta_bounds(2, 0.0), ParameterError);
  EXPECT_TRUE(zeta_bounds(2, 0.45).vacuous);
}

TEST(Bounds, RecursionFixedPoints) {
  for (double p : {0.1, 0.2, 0.3}) {
    const auto b = zeta_bounds(2, p);
    EXPECT_EQ(upper_recursion(2, p, 0.0), 0.0);
    EXPECT_GT(b.eps_plus, 0.0);
    EXPECT_NEAR(upper_recursion(2, p, b.eps_plus), b.eps_plus, 1e-9 * std::max(1.0, b.eps_plus));
    EXPECT_GT(b.eps_minus, 0.0);
    EXPECT_NEAR(lower_recursion(2, p, b.eps_minus), b.eps_minus, 1e-9 * std::max(1.0, b.eps_minus));
  }
}

TEST(Bounds, SaturationIntegralAgainstClosedForm) {
  // k = 1: eps log((1 + eps) / eps).
  for (double eps : {1e-6, 0.01, 0.5, 3.0}) {
    EXPECT_NEAR(detail::saturation_integral(eps, 1.0), eps * std::log((1.0 + eps) / eps), 1e-10);
  }
}

TEST(Csv, ZetaRowFormat) {
  std::ostringstream out;
  write_zeta_csv_header(out);
  write_zeta_csv_row(out, zeta_row(2, 1.0));
  EXPECT_EQ(out.str(), "p,zeta,lower,upper,eps_plus,eps_minus\n1,1,1,1,0,0\n");
}

TEST(MonteCarlo, Extremes) {
  const auto full = survival_mc(2, 1.0, 3, 200, 1, {0.5});
  EXPECT_EQ(full.zeta.mean, 1.0);
  EXPECT_EQ(full.rho_left[0].mean, 1.0);
  EXPECT_EQ(full.rho_right[0].mean, 1.0);
  const auto prof = depth_profile_mc(2, 0.3, 4, 1000, 2);
  EXPECT_EQ(prof.zeta[0].mean, 1.0);
  EXPECT_THROW(survival_mc(2, 0.3, 9, 10, 1), ParameterError);
}

TEST(MonteCarlo, AgreesWithIterateAtDepthSix) {
  const std::size_t trials = 40000;
  const auto mc = survival_mc(2, 0.3, 6, trials, 5);
  const double exact = zeta_k(2, 0.3, 6);
  EXPECT_NEAR(mc.zeta.mean, exact, 3.0 * mc.zeta.std_error);
}

TEST(MonteCarlo, SurvivalMcAndDepthProfileAgree) {
  const auto a = survival_mc(2, 0.3, 4, 20000, 77);
  const auto b = depth_profile_mc(2, 0.3, 4, 20000, 77);
  EXPECT_NEAR(a.zeta.mean, b.zeta[4].mean, 4.0 * a.zeta.std_error);
}
