#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "nclust/signed_graph.hpp"
#include "nclust/types.hpp"
#include "support/test_support.hpp"

using namespace nclust;

TEST_CASE("ingestion drops self-loops and keeps first duplicate") {
  std::istringstream in("0 1 1\n1 2 -1\n0 0 1\n");
  const LoadResult r = parse_snap_edgelist(in);
  CHECK(r.report.nodes == 3);
  CHECK(r.report.edges == 2);
  CHECK(r.report.self_loops_dropped == 1);
  CHECK(r.report.duplicates_dropped == 0);
  CHECK(r.graph.node_count() == 3);
  CHECK(r.graph.edges().size() == 2);
}

TEST_CASE("conflicting duplicate keeps the first sign and counts the conflict") {
  std::istringstream in("0 1 1\n0 1 -1\n");
  const LoadResult r = parse_snap_edgelist(in);
  CHECK(r.report.edges == 1);
  CHECK(r.report.duplicates_dropped == 1);
  CHECK(r.report.sign_conflicts == 1);
  CHECK(r.graph.edge_sign(0, 1) == 1);
}

TEST_CASE("ingestion accepts +1 signs, comments and sparse ids") {
  std::istringstream in("# comment line\n10 20 +1\n20 30 -1\n\n30 10 1\n");
  const LoadResult r = parse_snap_edgelist(in);
  CHECK(r.report.nodes == 3);
  CHECK(r.report.edges == 3);
  CHECK(r.graph.original_id(0) == 10);
  CHECK(r.graph.original_id(2) == 30);
  CHECK(r.graph.edge_sign(0, 1) == 1);
  CHECK(r.graph.edge_sign(1, 2) == -1);
}

TEST_CASE("malformed lines fail with the line number") {
  std::istringstream bad_fields("0 1 1\n0 2\n");
  CHECK_THROWS_WITH_AS(parse_snap_edgelist(bad_fields),
                       doctest::Contains("line 2"), std::runtime_error);
  std::istringstream zero_sign("0 1 0\n");
  CHECK_THROWS_AS(parse_snap_edgelist(zero_sign), std::runtime_error);
  std::istringstream bad_sign("0 1 7\n");
  CHECK_THROWS_AS(parse_snap_edgelist(bad_sign), std::runtime_error);
  std::istringstream not_number("0 x 1\n");
  CHECK_THROWS_AS(parse_snap_edgelist(not_number), std::runtime_error);
}

TEST_CASE("save/reload round-trip preserves the edge set") {
  std::istringstream in("5 9 1\n9 7 -1\n7 5 1\n5 7 -1\n");
  const LoadResult first = parse_snap_edgelist(in);
  std::ostringstream out;
  save_snap_edgelist(first.graph, out);
  std::istringstream back(out.str());
  const LoadResult second = parse_snap_edgelist(back);
  CHECK(first.graph.edges() == second.graph.edges());
  CHECK(first.graph.node_count() == second.graph.node_count());
}

TEST_CASE("undirected view is symmetric and collapses to first-seen sign") {
  std::istringstream in("0 1 1\n1 0 -1\n2 1 -1\n");
  const LoadResult r = parse_snap_edgelist(in);
  const SignedGraph& g = r.graph;
  CHECK(g.und_sign(0, 1) == 1);  // first-seen
  CHECK(g.und_sign(1, 0) == 1);
  CHECK(g.und_sign_conflicts() == 1);
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (const auto& nb : g.neighbors(u)) {
      bool mirrored = false;
      for (const auto& back : g.neighbors(nb.id)) mirrored |= back.id == u;
      CHECK(mirrored);
    }
}

TEST_CASE("clustering agreement: identity, swap, and a hand-checked 0.75") {
  GroundTruth truth(std::vector<Sign>{-1, -1, 1, 1});
  Clustering same{{0, 0, 1, 1}};
  Clustering flipped{{1, 1, 0, 0}};
  Clustering off_by_one{{0, 0, 0, 1}};
  CHECK(clustering_agreement(same, truth) == doctest::Approx(1.0));
  CHECK(clustering_agreement(flipped, truth) == doctest::Approx(1.0));
  // Enumerating both label mappings by hand: identity matches nodes
  // {0,1,3} (3/4), the swap matches only node 2 (1/4).
  CHECK(clustering_agreement(off_by_one, truth) == doctest::Approx(0.75));
}

TEST_CASE("agreement is invariant under global flips and errors on size mismatch") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GroundTruth truth = GroundTruth::random(17, seed);
    const Clustering self = truth.to_clustering();
    CHECK(clustering_agreement(self, truth) == doctest::Approx(1.0));
    Clustering flipped = self;
    for (auto& a : flipped.assignment) a ^= 1;
    CHECK(clustering_agreement(flipped, truth) == doctest::Approx(1.0));
  }
  Clustering small{{0, 1}};
  CHECK_THROWS_AS(clustering_agreement(small, GroundTruth::balanced(3)),
                  std::invalid_argument);
}

TEST_CASE("balanced sample keeps the minority and subsamples the majority") {
  std::vector<SignedEdge> edges;
  for (NodeId i = 0; i < 10; ++i) edges.push_back({i, static_cast<NodeId>(i + 1), 1});
  for (NodeId i = 0; i < 4; ++i) edges.push_back({static_cast<NodeId>(i + 1), i, -1});
  const SignedGraph g(12, std::move(edges));

  const BalancedSample s = make_balanced_sample(g, 7);
  CHECK(s.edge_indices.size() == 8);
  CHECK(s.positive == 4);
  CHECK(s.negative == 4);
  std::size_t pos = 0;
  for (auto idx : s.edge_indices) pos += g.edges()[idx].sign == 1;
  CHECK(pos == 4);

  const BalancedSample again = make_balanced_sample(g, 7);
  CHECK(again.edge_indices == s.edge_indices);  // deterministic per seed
}

TEST_CASE("already balanced input keeps all edges") {
  std::vector<SignedEdge> edges;
  for (NodeId i = 0; i < 5; ++i) {
    edges.push_back({i, static_cast<NodeId>(i + 5), 1});
    edges.push_back({static_cast<NodeId>(i + 5), i, -1});
  }
  const SignedGraph g(10, std::move(edges));
  const BalancedSample s = make_balanced_sample(g, 3);
  CHECK(s.edge_indices.size() == 10);
}

TEST_CASE("balanced sample sign counts are equal for every seed") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const SignedGraph g = testsupport::random_directed_signed(14, 0.3, 0.25, seed + 100);
    std::size_t pos = 0, neg = 0;
    for (const auto& e : g.edges()) (e.sign == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0) {
      CHECK_THROWS_AS(make_balanced_sample(g, seed), std::invalid_argument);
      continue;
    }
    const BalancedSample s = make_balanced_sample(g, seed);
    std::size_t sp = 0, sn = 0;
    for (auto idx : s.edge_indices) (g.edges()[idx].sign == 1 ? sp : sn)++;
    CHECK(sp == sn);
    CHECK(sp == std::min(pos, neg));
  }
}

TEST_CASE("single-sign graphs cannot be balanced") {
  const SignedGraph g(3, {{0, 1, 1}, {1, 2, 1}});
  CHECK_THROWS_AS(make_balanced_sample(g, 1), std::invalid_argument);
}

TEST_CASE("graph constructor validates its input") {
  CHECK_THROWS_AS(SignedGraph(2, {{0, 0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(SignedGraph(2, {{0, 3, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(SignedGraph(2, {{0, 1, 1}, {0, 1, -1}}), std::invalid_argument);
  CHECK_THROWS_AS(SignedGraph(2, {{0, 1, 0}}), std::invalid_argument);
}
