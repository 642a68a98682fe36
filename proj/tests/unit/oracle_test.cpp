#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nclust/oracle.hpp"
#include "nclust/types.hpp"

using namespace nclust;

TEST_CASE("q=0 answers are the exact relation") {
  NoisyOracle oracle(GroundTruth::balanced(10), {0.0, 42});
  CHECK(oracle.query(0, 1) == 1);   // both red
  CHECK(oracle.query(8, 9) == 1);   // both blue
  CHECK(oracle.query(0, 9) == -1);  // across
}

TEST_CASE("repeat queries are memoized and do not count") {
  NoisyOracle oracle(GroundTruth::balanced(100), {0.3, 7});
  const Sign first = oracle.query(3, 50);
  const auto count = oracle.query_count();
  CHECK(count == 1);
  CHECK(oracle.query(3, 50) == first);
  CHECK(oracle.query(50, 3) == first);  // unordered pair
  CHECK(oracle.query_count() == count);
  CHECK(oracle.was_queried(50, 3));
}

TEST_CASE("self queries are rejected") {
  NoisyOracle oracle(GroundTruth::balanced(4), {0.1, 1});
  CHECK_THROWS_AS(oracle.query(2, 2), std::invalid_argument);
}

TEST_CASE("config validation enforces 0 <= q < 1/2") {
  const OracleConfig too_high{0.5, 1};
  const OracleConfig negative{-0.01, 1};
  const OracleConfig noiseless{0.0, 1};
  const OracleConfig near_half{0.499, 1};
  CHECK_THROWS_AS(too_high.validate(), std::invalid_argument);
  CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
  CHECK_NOTHROW(noiseless.validate());
  CHECK_NOTHROW(near_half.validate());
}

TEST_CASE("empirical flip rate converges to q (3 sigma at K = 1e5)") {
  constexpr std::size_t kPairs = 100000;
  const double q = 0.3;
  GroundTruth truth = GroundTruth::uniform(2 * kPairs, 1);
  NoisyOracle oracle(std::move(truth), {q, 2024});
  std::size_t flips = 0;
  for (std::size_t i = 0; i < kPairs; ++i) {
    const NodeId u = static_cast<NodeId>(2 * i);
    const NodeId v = static_cast<NodeId>(2 * i + 1);
    if (oracle.query(u, v) == -1) ++flips;  // truth is all same-cluster
  }
  const double rate = static_cast<double>(flips) / kPairs;
  const double sigma = std::sqrt(q * (1 - q) / kPairs);
  CHECK(std::abs(rate - q) < 3.0 * sigma);
  CHECK(oracle.query_count() == kPairs);
}

TEST_CASE("same seed gives an identical transcript, regardless of order") {
  OracleConfig config{0.25, 99};
  NoisyOracle a(GroundTruth::balanced(50), config);
  NoisyOracle b(GroundTruth::balanced(50), config);
  a.record_transcript(true);
  b.record_transcript(true);
  for (NodeId u = 0; u < 10; ++u)
    for (NodeId v = u + 1; v < 10; ++v) a.query(u, v);
  for (NodeId u = 10; u-- > 0;)
    for (NodeId v = 10; v-- > u + 1;) b.query(u, v);
  REQUIRE(a.transcript().size() == b.transcript().size());
  for (const auto& e : a.transcript()) {
    bool found = false;
    for (const auto& f : b.transcript())
      if (pair_key(e.u, e.v) == pair_key(f.u, f.v)) {
        found = true;
        CHECK(e.answer == f.answer);
      }
    CHECK(found);
  }
}

TEST_CASE("transcript CSV has the u,v,answer layout") {
  NoisyOracle oracle(GroundTruth::balanced(4), {0.0, 5});
  oracle.record_transcript(true);
  oracle.query(0, 1);
  oracle.query(0, 3);
  std::ostringstream out;
  oracle.export_transcript_csv(out);
  CHECK(out.str() == "u,v,answer\n0,1,1\n0,3,-1\n");
}

TEST_CASE("answers on disjoint pairs look independent (lag correlation)") {
  constexpr std::size_t kPairs = 100000;
  NoisyOracle oracle(GroundTruth::uniform(2 * kPairs, 1), {0.3, 11});
  std::vector<int> noise;
  noise.reserve(kPairs);
  for (std::size_t i = 0; i < kPairs; ++i)
    noise.push_back(oracle.query(static_cast<NodeId>(2 * i), static_cast<NodeId>(2 * i + 1)));
  double mean = 0.0;
  for (int x : noise) mean += x;
  mean /= kPairs;
  double lag = 0.0;
  for (std::size_t i = 0; i + 1 < noise.size(); ++i) lag += noise[i] * noise[i + 1];
  lag = lag / (kPairs - 1) - mean * mean;
  CHECK(std::abs(lag) < 3.0 / std::sqrt(static_cast<double>(kPairs)));
}

TEST_CASE("query graph: p=1 is complete, p=0 is empty") {
  NoisyOracle oracle(GroundTruth::balanced(4), {0.0, 3});
  const QueryGraph complete = sample_query_graph(oracle, 4, 1.0);
  CHECK(complete.graph.edges().size() == 6);
  CHECK(complete.queries == 6);
  CHECK(oracle.query_count() == 6);

  NoisyOracle other(GroundTruth::balanced(4), {0.0, 3});
  const QueryGraph empty = sample_query_graph(other, 4, 0.0);
  CHECK(empty.graph.edges().size() == 0);
  CHECK(empty.queries == 0);
}

TEST_CASE("query graph edges carry the oracle answers") {
  NoisyOracle oracle(GroundTruth::balanced(30), {0.2, 17});
  const QueryGraph qg = sample_query_graph(oracle, 30, 0.4);
  for (const SignedEdge& e : qg.graph.edges()) {
    CHECK(qg.answer(e.src, e.dst) == e.sign);
    CHECK(oracle.query(e.src, e.dst) == e.sign);  // cached
  }
  CHECK(oracle.query_count() == qg.queries);
}

TEST_CASE("query graph edge count matches binomial mean over 50 seeds") {
  // N = C(1000,2) = 499500 pairs at p = 0.05: mean 24975, single-draw
  // sigma = sqrt(N p (1-p)) ~ 154.
  const double p = 0.05;
  const double pairs = 499500.0;
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    NoisyOracle oracle(GroundTruth::balanced(1000), {0.1, seed});
    total += static_cast<double>(sample_query_graph(oracle, 1000, p).queries);
  }
  const double mean = total / 50.0;
  const double sigma = std::sqrt(pairs * p * (1 - p));
  CHECK(std::abs(mean - pairs * p) < 3.0 * sigma);
}
