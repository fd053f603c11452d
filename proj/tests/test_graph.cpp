#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "perclab/bitvec.hpp"
#include "perclab/graph.hpp"
#include "perclab/rng.hpp"
#include "perclab/union_find.hpp"

using namespace perclab;

TEST(BitVector, SetTestCount) {
  BitVector b(70);
  EXPECT_EQ(b.count(), 0u);
  b.set(0);
  b.set(69);
  b.set(64);
  EXPECT_TRUE(b.test(69));
  EXPECT_FALSE(b.test(68));
  EXPECT_EQ(b.count(), 3u);
  b.set(64, false);
  EXPECT_EQ(b.count(), 2u);
  BitVector full(70, true);
  EXPECT_EQ(full.count(), 70u);
}

TEST(BitVector, HexRoundTrip) {
  Rng rng(3);
  for (std::size_t size : {0u, 1u, 7u, 8u, 9u, 63u, 64u, 65u, 200u}) {
    BitVector b(size);
    for (std::size_t i = 0; i < size; ++i) b.set(i, rng.bernoulli(0.5));
    EXPECT_EQ(BitVector::from_hex(b.to_hex(), size), b);
  }
}

TEST(BitVector, HexLayoutIsLsbFirstPerByte) {
  BitVector b(12);
  b.set(0);
  b.set(9);
  EXPECT_EQ(b.to_hex(), "0102");
}

TEST(BitVector, FromHexRejectsGarbage) {
  EXPECT_ANY_THROW(BitVector::from_hex("zz", 8));
  EXPECT_ANY_THROW(BitVector::from_hex("01", 20));
}

TEST(Graph, NormalizesOrientation) {
  Graph g(3, {{2, 0}, {1, 2}});
  EXPECT_EQ(g.edge(0), (Edge{0, 2}));
  EXPECT_EQ(g.edge(1), (Edge{1, 2}));
  EXPECT_EQ(g.degree(2), 2u);
  EXPECT_EQ(g.num_arcs(), 4u);
}

TEST(Graph, RejectsBadEdges) {
  EXPECT_THROW(Graph(3, {{1, 1}}), InvalidInput);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), InvalidInput);
  EXPECT_THROW(Graph(3, {{0, 3}}), InvalidInput);
}

TEST(Graph, AdjacencySortedAndConsistent) {
  Rng rng(11);
  std::vector<Edge> edges;
  std::set<std::pair<Vertex, Vertex>> seen;
  while (edges.size() < 60) {
    auto u = static_cast<Vertex>(rng.below(30));
    auto v = static_cast<Vertex>(rng.below(30));
    if (u == v || !seen.insert({std::min(u, v), std::max(u, v)}).second) continue;
    edges.push_back({u, v});
  }
  Graph g(30, edges);
  std::size_t total = 0;
  for (Vertex v = 0; v < 30; ++v) {
    const auto nb = g.neighbors(v);
    total += nb.size();
    for (std::size_t i = 0; i + 1 < nb.size(); ++i) EXPECT_LT(nb[i].vertex, nb[i + 1].vertex);
    for (const auto& x : nb) {
      const auto e = g.edge(x.edge);
      EXPECT_TRUE((e.u == v && e.v == x.vertex) || (e.v == v && e.u == x.vertex));
    }
  }
  EXPECT_EQ(total, 2 * g.num_edges());
}

TEST(Graph, ArcLayout) {
  Graph g(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(Graph::arc_index(1, false), 2u);
  EXPECT_EQ(Graph::arc_index(1, true), 3u);
  EXPECT_EQ(g.arc_from(0, 0), 0u);
  EXPECT_EQ(g.arc_from(1, 0), 1u);
  EXPECT_EQ(g.arc_from(2, 1), 3u);
}

TEST(Graph, HashDistinguishesGraphs) {
  EXPECT_EQ(named::path(4).hash(), named::path(4).hash());
  EXPECT_NE(named::path(4).hash(), named::star(3).hash());
  EXPECT_NE(named::path(4).hash(), named::path(5).hash());
}

TEST(EdgeList, RoundTrip) {
  const Graph g = named::barbell(4);
  std::stringstream ss;
  write_edge_list(ss, g);
  const Graph h = read_edge_list(ss);
  EXPECT_EQ(h.num_vertices(), g.num_vertices());
  EXPECT_EQ(h.edges(), g.edges());
}

TEST(EdgeList, SkipsCommentsAndBlankLines) {
  std::istringstream in("# a graph\n\n3 2\n0 1\n# mid\n1 2\n");
  const Graph g = read_edge_list(in);
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(EdgeList, RejectsMalformedInput) {
  for (const char* text : {"", "3\n", "3 2\n0 1\n", "3 1\n1 0\n", "3 1\n0 3\n", "3 1\n0 0\n", "3 1\n0 1 5\n",
                           "3 1\n0 1\n1 2\n", "3 1\nx y\n", "3 2\n0 1\n0 1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_edge_list(in), InvalidInput) << "input: " << text;
  }
}

TEST(DiGraphView, SizeMismatchIsInvalidInput) {
  const Graph g = named::path(3);
  EXPECT_THROW(DiGraphView(g, BitVector(3)), InvalidInput);
}

TEST(DiGraphView, OutAndInNeighbors) {
  const Graph g = named::path(3);
  BitVector arcs(4);
  arcs.set(0);  // 0 -> 1
  arcs.set(3);  // 2 -> 1
  const DiGraphView d(g, arcs);
  std::vector<Vertex> out1, in1;
  d.for_each_out(1, [&](Vertex w) { out1.push_back(w); });
  d.for_each_in(1, [&](Vertex w) { in1.push_back(w); });
  EXPECT_TRUE(out1.empty());
  EXPECT_EQ(in1, (std::vector<Vertex>{0, 2}));
  const auto r = d.reversed();
  std::vector<Vertex> rout1;
  r.for_each_out(1, [&](Vertex w) { rout1.push_back(w); });
  EXPECT_EQ(rout1, (std::vector<Vertex>{0, 2}));
}

TEST(Named, Shapes) {
  EXPECT_EQ(named::path(5).num_edges(), 4u);
  EXPECT_EQ(named::cycle(5).num_edges(), 5u);
  EXPECT_EQ(named::complete(5).num_edges(), 10u);
  EXPECT_EQ(named::star(4).degree(0), 4u);
  const Graph b = named::barbell(3);
  EXPECT_EQ(b.num_edges(), 7u);
  EXPECT_EQ(b.degree(2), 3u);
  EXPECT_THROW(named::cycle(2), ParameterError);
}

TEST(Rng, DeterministicAndIndependentOfOrder) {
  Rng a(derive_seed(7, Stream::kBond, 3));
  Rng b(derive_seed(7, Stream::kBond, 3));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  EXPECT_NE(derive_seed(7, Stream::kBond, 3), derive_seed(7, Stream::kOriented, 3));
  EXPECT_NE(derive_seed(7, Stream::kBond, 3), derive_seed(7, Stream::kBond, 4));
  EXPECT_NE(derive_seed(7, Stream::kBond, 3), derive_seed(8, Stream::kBond, 3));
}

TEST(Rng, UniformRangeAndMean) {
  Rng rng(1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_TRUE(rng.bernoulli(1.0));
  EXPECT_FALSE(rng.bernoulli(0.0));
}

TEST(UnionFind, MergesAndCountsSizes) {
  UnionFind uf(6);
  uf.unite(0, 1);
  uf.unite(2, 3);
  uf.unite(1, 3);
  EXPECT_EQ(uf.find(0), uf.find(2));
  EXPECT_NE(uf.find(0), uf.find(4));
  EXPECT_EQ(uf.set_size(3), 4u);
  EXPECT_EQ(uf.set_size(5), 1u);
}
