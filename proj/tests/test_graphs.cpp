#include <gtest/gtest.h>

#include <sstream>

#include "orthograph/graphs.hpp"

using namespace orthograph;

namespace {

// Pairwise oracle: vertices are the listed points, u ~ v iff beta(u, v) = 0.
void expect_matches_pairwise(const Graph& g, const QuadraticSpace& s, const std::vector<ProjectivePoint>& pts,
                             bool loops_on_singular) {
  ASSERT_EQ(g.size(), pts.size());
  for (std::size_t u = 0; u < pts.size(); ++u) {
    ASSERT_EQ(g.labels()[u], pts[u]);
    for (std::size_t v = 0; v < pts.size(); ++v) {
      const bool orth = s.bilinear(pts[u].coords, pts[v].coords) == 0;
      if (u == v) {
        ASSERT_EQ(g.has_loop(u), loops_on_singular && orth);
        ASSERT_EQ(g.adjacent(u, u), loops_on_singular && orth);
      } else {
        ASSERT_EQ(g.adjacent(u, v), orth) << "u=" << u << " v=" << v;
      }
    }
  }
}

std::vector<ProjectivePoint> points_of(const QuadraticSpace& s, std::optional<PointClass> c) {
  std::vector<ProjectivePoint> out;
  s.for_each_point([&](const ProjectivePoint& p) {
    if (!c || s.classify(p) == *c) out.push_back(p);
  });
  return out;
}

}  // namespace

TEST(Graphs, HyperplaneBuilderMatchesPairwiseOracle) {
  for (std::size_t k = 2; k <= 4; ++k) {
    for (std::uint32_t q : {3U, 5U, 7U, 9U}) {
      const QuadraticSpace s(Field::of_order(q), k);
      for (auto eps : {PointClass::Square, PointClass::Nonsquare}) {
        expect_matches_pairwise(build_gamma(s, eps), s, points_of(s, eps), false);
      }
      expect_matches_pairwise(build_gamma_prime(s), s, points_of(s, std::nullopt), true);
      const auto standard = QuadraticSpace::standard(s.field(), k);
      std::vector<ProjectivePoint> ak_points;
      standard.for_each_point([&](const ProjectivePoint& p) {
        if (standard.form(p.coords) != 0) ak_points.push_back(p);
      });
      expect_matches_pairwise(build_ak(s.field(), k), standard, ak_points, false);
    }
  }
}

TEST(Graphs, ParallelBuildIsIdentical) {
  const QuadraticSpace s(Field::of_order(7), 4);
  EXPECT_EQ(build_gamma(s, PointClass::Square, {.threads = 1}), build_gamma(s, PointClass::Square, {.threads = 3}));
  EXPECT_EQ(build_gamma_prime(s, {.threads = 1}), build_gamma_prime(s, {.threads = 4}));
}

TEST(Graphs, GammaIsRegularWithKnownParameters) {
  const QuadraticSpace s(Field::of_order(5), 3);
  const auto stats = graph_stats(build_gamma(s, PointClass::Square));
  EXPECT_EQ(stats.n, 10U);
  EXPECT_TRUE(stats.is_regular);
  EXPECT_EQ(stats.d, 3U);
  EXPECT_EQ(stats.edge_count, 15U);
  EXPECT_EQ(stats.loop_count, 0U);

  const auto line = graph_stats(build_gamma(QuadraticSpace(Field::of_order(5), 2), PointClass::Square));
  EXPECT_EQ(line.n, 3U);
  EXPECT_EQ(line.edge_count, 0U);
}

TEST(Graphs, GammaPrimeCommonNeighbourCounts) {
  // Direct count over neighbour lists; loops count as adjacency to oneself.
  for (std::size_t k = 3; k <= 4; ++k) {
    for (std::uint32_t q : {3U, 5U, 7U, 9U}) {
      const QuadraticSpace s(Field::of_order(q), k);
      const Graph g = build_gamma_prime(s);
      if (g.size() > 1500) continue;
      std::size_t delta = 0, mu = 0;
      for (std::size_t i = 0, power = 1; i + 1 < k; ++i, power *= q) {
        delta += power;
        if (i + 2 < k) mu += power;
      }
      std::vector<std::vector<std::size_t>> adj(g.size());
      for (std::size_t v = 0; v < g.size(); ++v) {
        adj[v] = g.neighbors(v);
        if (g.has_loop(v)) adj[v].push_back(v);
        std::sort(adj[v].begin(), adj[v].end());
      }
      for (std::size_t u = 0; u < g.size(); ++u) {
        ASSERT_EQ(adj[u].size(), delta);
        for (std::size_t v = u + 1; v < g.size(); ++v) {
          std::vector<std::size_t> common;
          std::set_intersection(adj[u].begin(), adj[u].end(), adj[v].begin(), adj[v].end(),
                                std::back_inserter(common));
          ASSERT_EQ(common.size(), mu) << "k=" << k << " q=" << q;
        }
      }
      EXPECT_EQ(g.loop_count(), s.census().singular);
    }
  }
}

TEST(Graphs, InducedNeighbourhoodAndRebuild) {
  const QuadraticSpace s(Field::of_order(5), 4);
  const Graph g = build_gamma(s, PointClass::Square);
  const Graph nb = induced_neighborhood(g, 7);
  const auto nbrs = g.neighbors(7);
  ASSERT_EQ(nb.size(), nbrs.size());
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    EXPECT_EQ(nb.labels()[i], g.labels()[nbrs[i]]);
    for (std::size_t j = 0; j < nbrs.size(); ++j) EXPECT_EQ(nb.adjacent(i, j), g.adjacent(nbrs[i], nbrs[j]));
  }
  EXPECT_EQ(nb.meta().neighborhood_path, std::vector<std::size_t>{7});
  EXPECT_EQ(rebuild(nb.meta()), nb);
  EXPECT_EQ(rebuild(g.meta()), g);
  EXPECT_EQ(rebuild(build_ak(s.field(), 3).meta()), build_ak(s.field(), 3));
}

TEST(Graphs, VertexCapIsEnforced) {
  const QuadraticSpace s(Field::of_order(13), 5);
  EXPECT_THROW(build_gamma_prime(s, {.vertex_cap = 20000}), CapExceeded);
}

TEST(Graphs, EdgeListAndDimacsOutput) {
  const Graph g = build_gamma(QuadraticSpace(Field::of_order(5), 3), PointClass::Square);
  std::ostringstream edges;
  write_edge_list(edges, g);
  std::istringstream in(edges.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "# gamma 3 5 square 10 15");
  std::size_t lines = 0;
  std::size_t u = 0, v = 0;
  while (in >> u >> v) {
    EXPECT_TRUE(g.adjacent(u, v));
    EXPECT_LT(u, v);
    ++lines;
  }
  EXPECT_EQ(lines, 15U);

  std::ostringstream dimacs;
  write_dimacs(dimacs, g);
  EXPECT_NE(dimacs.str().find("p edge 10 15\n"), std::string::npos);
  EXPECT_EQ(dimacs.str().rfind("c ", 0), 0U);

  const Graph gp = build_gamma_prime(QuadraticSpace(Field::of_order(3), 3));
  std::ostringstream loops;
  write_edge_list(loops, gp);
  const auto stats = graph_stats(gp);
  EXPECT_EQ(loops.str().substr(0, loops.str().find('\n')),
            "# gamma-prime 3 3 - 13 " + std::to_string(stats.edge_count + stats.loop_count));
}
