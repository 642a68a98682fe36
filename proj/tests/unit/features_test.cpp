#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "nclust/features.hpp"
#include "support/test_support.hpp"

using namespace nclust;

TEST_CASE("degree features: endpoints with no other edges give zeros") {
  const SignedGraph g(2, {{0, 1, 1}});
  const DegreeFeatures f = degree_features(g, 0, 1);
  CHECK(f.d_out_pos_u == 0);
  CHECK(f.d_out_neg_u == 0);
  CHECK(f.d_in_pos_v == 0);
  CHECK(f.d_in_neg_v == 0);
  CHECK(f.d_out_u == 0);
  CHECK(f.d_in_v == 0);
  CHECK(f.embeddedness == 0);
}

TEST_CASE("degree features: star with the target edge left out") {
  const SignedGraph g(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
  const DegreeFeatures f = degree_features(g, 0, 1);
  CHECK(f.d_out_pos_u == 2);
  CHECK(f.d_out_u == 2);
  CHECK(f.d_in_v == 0);
}

TEST_CASE("degree features equal a brute-force recount on random graphs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SignedGraph g = testsupport::random_directed_signed(20, 0.25, 0.4, seed);
    for (const SignedEdge& e : g.edges()) {
      const DegreeFeatures f = degree_features(g, e.src, e.dst);
      std::uint32_t op = 0, on = 0, ip = 0, in = 0;
      for (const SignedEdge& o : g.edges()) {
        if (o.src == e.src && o.dst == e.dst) continue;  // leave-one-out
        if (o.src == e.src) (o.sign == 1 ? op : on)++;
        if (o.dst == e.dst) (o.sign == 1 ? ip : in)++;
      }
      CHECK(f.d_out_pos_u == op);
      CHECK(f.d_out_neg_u == on);
      CHECK(f.d_in_pos_v == ip);
      CHECK(f.d_in_neg_v == in);
      CHECK(f.d_out_u == op + on);
      CHECK(f.d_in_v == ip + in);
      CHECK(f.embeddedness == embeddedness(g, e.src, e.dst));
    }
  }
}

TEST_CASE("triads: the two pinned table rows") {
  // u -> w (+), w -> v (+) is type 1.
  const SignedGraph a(3, {{0, 2, 1}, {2, 1, 1}, {0, 1, 1}});
  const auto ca = triad_counts(a, 0, 1);
  CHECK(ca[0] == 1);
  CHECK(std::accumulate(ca.begin(), ca.end(), 0u) == 1);

  // u <- w (-), w <- v (-) is type 16.
  const SignedGraph b(3, {{2, 0, -1}, {1, 2, -1}, {0, 1, 1}});
  const auto cb = triad_counts(b, 0, 1);
  CHECK(cb[15] == 1);
  CHECK(std::accumulate(cb.begin(), cb.end(), 0u) == 1);
}

TEST_CASE("triads: parallel directed edges contribute every combination") {
  const SignedGraph g(3, {{0, 2, 1}, {2, 0, 1}, {2, 1, 1}, {1, 2, -1}, {0, 1, 1}});
  const auto c = triad_counts(g, 0, 1);
  // Combinations: (u->w+, w->v+)=1, (u->w+, v->w-)=10, (w->u+, w->v+)=5,
  // (w->u+, v->w-)=14.
  CHECK(c[0] == 1);
  CHECK(c[9] == 1);
  CHECK(c[4] == 1);
  CHECK(c[13] == 1);
  CHECK(std::accumulate(c.begin(), c.end(), 0u) == 4);
  CHECK(embeddedness(g, 0, 1) == 1);  // sum = 4C with two parallel pairs
}

TEST_CASE("triad counts equal the brute-force classifier on random graphs") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const SignedGraph g = testsupport::random_directed_signed(20, 0.3, 0.5, seed + 50);
    for (const SignedEdge& e : g.edges()) {
      const auto fast = triad_counts(g, e.src, e.dst);
      const auto brute = testsupport::brute_force_triads(g, e.src, e.dst);
      CHECK(fast == brute);
      const std::uint32_t total = std::accumulate(fast.begin(), fast.end(), 0u);
      CHECK(total <= 4 * embeddedness(g, e.src, e.dst));
    }
  }
}

TEST_CASE("triad sum equals embeddedness when each side has single edges") {
  // Path-structured graph: every (endpoint, neighbor) pair has exactly
  // one directed edge, so each common neighbor is one configuration.
  const SignedGraph g(5, {{0, 2, 1}, {2, 1, -1}, {0, 3, -1}, {3, 1, 1}, {4, 0, 1},
                          {0, 1, 1}});
  const auto c = triad_counts(g, 0, 1);
  CHECK(std::accumulate(c.begin(), c.end(), 0u) == embeddedness(g, 0, 1));
  CHECK(embeddedness(g, 0, 1) == 2);
}

TEST_CASE("embeddedness is symmetric") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const SignedGraph g = testsupport::random_directed_signed(18, 0.3, 0.5, seed + 9);
    for (NodeId u = 0; u < 18; ++u)
      for (NodeId v = u + 1; v < 18; ++v)
        CHECK(embeddedness(g, u, v) == embeddedness(g, v, u));
  }
}

TEST_CASE("greedy paths: single length-3 path with a negative product") {
  const SignedGraph g(4, {{0, 1, 1}, {1, 2, -1}, {2, 3, 1}, {0, 3, 1}});
  const PathCollection c = greedy_disjoint_paths(g, 0, 3, 3);
  REQUIRE(c.paths.size() == 1);
  CHECK(c.paths[0] == std::vector<NodeId>{0, 1, 2, 3});
  CHECK(c.negative() == 1);
  CHECK(c.positive() == 0);
}

TEST_CASE("greedy paths: node-disjoint paths are both collected") {
  const SignedGraph g(6, {{0, 1, 1}, {1, 2, 1}, {2, 5, 1},
                          {0, 3, 1}, {3, 4, -1}, {4, 5, 1}, {0, 5, -1}});
  const PathCollection c = greedy_disjoint_paths(g, 0, 5, 3);
  REQUIRE(c.paths.size() == 2);
  CHECK(c.positive() == 1);
  CHECK(c.negative() == 1);
}

TEST_CASE("greedy paths never use the target edge and support only 3 and 4") {
  const SignedGraph g(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  const PathCollection c = greedy_disjoint_paths(g, 0, 2, 3);
  CHECK(c.paths.empty());  // the only route is length 2
  CHECK_THROWS_AS(greedy_disjoint_paths(g, 0, 2, 5), std::invalid_argument);
}

TEST_CASE("greedy path collections pass the structural checker on random graphs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SignedGraph g = testsupport::random_directed_signed(15, 0.25, 0.5, seed + 77);
    for (NodeId s = 0; s < 15; s += 3)
      for (NodeId t = 1; t < 15; t += 4) {
        if (s == t) continue;
        for (std::size_t len : {std::size_t{3}, std::size_t{4}}) {
          const PathCollection c = greedy_disjoint_paths(g, s, t, len);
          const std::string problem = testsupport::check_path_collection(g, c, len, true);
          CHECK_MESSAGE(problem.empty(), problem);
        }
      }
  }
}

TEST_CASE("greedy_paths_up_to collects the direct edge first") {
  const SignedGraph g(4, {{0, 3, -1}, {0, 1, 1}, {1, 3, 1}, {0, 2, 1}, {2, 3, -1}});
  const PathCollection c = greedy_paths_up_to(g, 0, 3, 3, false);
  REQUIRE(c.paths.size() == 3);
  CHECK(c.paths[0] == std::vector<NodeId>{0, 3});
  CHECK(c.products[0] == -1);
  CHECK(c.positive() == 1);
  CHECK(c.negative() == 2);
}

TEST_CASE("feature vector: two-node graph is all zeros") {
  const SignedGraph g(2, {{0, 1, -1}});
  const FeatureVector fv = feature_vector(g, 0, 1);
  for (double x : fv.as_array()) CHECK(x == 0.0);
}

TEST_CASE("feature vector: one type-1 triad and nothing else") {
  const SignedGraph g(3, {{0, 1, 1}, {0, 2, 1}, {2, 1, 1}});
  const FeatureVector fv = feature_vector(g, 0, 1);
  const auto a = fv.as_array();
  CHECK(a[0] == 1.0);  // d_out_pos(u): the u->w edge
  CHECK(a[2] == 1.0);  // d_in_pos(v): the w->v edge
  CHECK(a[6] == 1.0);  // embeddedness
  CHECK(a[7] == 1.0);  // triad type 1
  CHECK(fv.p3_pos + fv.p3_neg + fv.p4_pos + fv.p4_neg == 0);  // length-2 is not a path feature
}

TEST_CASE("feature vector is a pure function and requires a real edge") {
  const SignedGraph g = testsupport::random_directed_signed(20, 0.25, 0.5, 6);
  REQUIRE(!g.edges().empty());
  const SignedEdge e = g.edges()[0];
  const FeatureVector a = feature_vector(g, e.src, e.dst);
  const FeatureVector b = feature_vector(g, e.src, e.dst);
  CHECK(a.as_array() == b.as_array());
  NodeId u = 0, v = 0;
  bool found_non_edge = false;
  for (NodeId i = 0; i < 20 && !found_non_edge; ++i)
    for (NodeId j = 0; j < 20 && !found_non_edge; ++j)
      if (i != j && !g.has_edge(i, j)) {
        u = i;
        v = j;
        found_non_edge = true;
      }
  REQUIRE(found_non_edge);
  CHECK_THROWS_AS(feature_vector(g, u, v), std::invalid_argument);
}
