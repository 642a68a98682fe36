#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nclust/random.hpp"
#include "nclust/signed_graph.hpp"
#include "nclust/types.hpp"

namespace nclust {

struct OracleConfig {
  double q = 0.0;        // corruption probability in [0, 1/2)
  std::uint64_t seed = 0;

  double delta() const { return 1.0 - 2.0 * q; }
  // Throws std::invalid_argument unless 0 <= q < 1/2.
  void validate() const;
};

// Same-cluster oracle of the query model: a pair query returns
// sigma(u)*sigma(v) flipped with probability q. Each unordered pair is
// answered once; repeat queries return the cached answer and do not
// count. The noise draw is keyed by (seed, {u,v}), so the transcript is
// reproducible regardless of query order.
class NoisyOracle {
 public:
  struct TranscriptEntry {
    NodeId u, v;
    Sign answer;
  };

  NoisyOracle(GroundTruth truth, OracleConfig config);

  Sign query(NodeId u, NodeId v);  // throws std::invalid_argument on u == v

  std::uint64_t query_count() const { return query_count_; }
  bool was_queried(NodeId u, NodeId v) const;

  std::size_t universe_size() const { return truth_.size(); }
  const GroundTruth& truth() const { return truth_; }
  const OracleConfig& config() const { return config_; }

  // Transcript recording is opt-in; large sweeps leave it off.
  void record_transcript(bool on) { record_ = on; }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  // CSV `u,v,answer`, one row per distinct query in ask order.
  void export_transcript_csv(std::ostream& out) const;

 private:
  Sign answer_for(NodeId u, NodeId v) const;

  GroundTruth truth_;
  OracleConfig config_;
  std::unordered_set<std::uint64_t> asked_;
  std::uint64_t query_count_ = 0;
  bool record_ = false;
  std::vector<TranscriptEntry> transcript_;
};

// Signed graph whose edges are queried pairs with oracle answers as signs.
struct QueryGraph {
  SignedGraph graph;
  std::unordered_map<std::uint64_t, Sign> answers;  // pair_key -> answer
  std::uint64_t queries = 0;

  bool has_answer(NodeId u, NodeId v) const {
    return answers.contains(pair_key(u, v));
  }
  // Throws std::out_of_range when the pair was never queried.
  Sign answer(NodeId u, NodeId v) const { return answers.at(pair_key(u, v)); }
};

// G(n,p): each unordered pair included independently with probability p
// (geometric skipping; deterministic given the oracle seed), included
// pairs queried through the oracle. Requires 0 <= p <= 1 and
// n <= oracle universe.
QueryGraph sample_query_graph(NoisyOracle& oracle, NodeId n, double p);

}  // namespace nclust
