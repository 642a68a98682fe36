#include "nclust/oracle.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace nclust {

void OracleConfig::validate() const {
  if (!(q >= 0.0) || !(q < 0.5))
    throw std::invalid_argument("oracle corruption probability q must satisfy 0 <= q < 1/2");
}

NoisyOracle::NoisyOracle(GroundTruth truth, OracleConfig config)
    : truth_(std::move(truth)), config_(config) {
  config_.validate();
}

Sign NoisyOracle::answer_for(NodeId u, NodeId v) const {
  // eta = -1 with probability q, keyed by the unordered pair so the
  // answer does not depend on query order.
  const bool flip = pair_uniform(config_.seed, u, v) < config_.q;
  const Sign eta = flip ? Sign{-1} : Sign{1};
  return static_cast<Sign>(truth_.relation(u, v) * eta);
}

Sign NoisyOracle::query(NodeId u, NodeId v) {
  if (u == v) throw std::invalid_argument("oracle query requires u != v");
  if (u >= truth_.size() || v >= truth_.size())
    throw std::invalid_argument("oracle query outside the universe");
  const Sign answer = answer_for(u, v);
  if (asked_.insert(pair_key(u, v)).second) {
    ++query_count_;
    if (record_) transcript_.push_back({u, v, answer});
  }
  return answer;
}

bool NoisyOracle::was_queried(NodeId u, NodeId v) const {
  return asked_.contains(pair_key(u, v));
}

void NoisyOracle::export_transcript_csv(std::ostream& out) const {
  out << "u,v,answer\n";
  for (const TranscriptEntry& e : transcript_)
    out << e.u << ',' << e.v << ',' << static_cast<int>(e.answer) << '\n';
}

QueryGraph sample_query_graph(NoisyOracle& oracle, NodeId n, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("edge probability p must be in [0, 1]");
  if (n > oracle.universe_size())
    throw std::invalid_argument("query graph larger than oracle universe");

  QueryGraph qg;
  std::vector<SignedEdge> edges;
  if (p > 0.0 && n >= 2) {
    Rng rng(derive_seed(oracle.config().seed, 0x67616d706c65ULL));
    edges.reserve(static_cast<std::size_t>(p * n * (n - 1) / 2 * 1.05) + 16);
    if (p >= 1.0) {
      for (NodeId u = 0; u + 1 < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v, oracle.query(u, v)});
    } else {
      // Row-wise geometric skipping; equivalent to iid Bernoulli(p) per pair.
      const double log1mp = std::log1p(-p);
      for (NodeId u = 0; u + 1 < n; ++u) {
        std::uint64_t v = u;
        while (true) {
          const double r = rng.next_double();
          const double skip = std::floor(std::log1p(-r) / log1mp);
          v += 1 + static_cast<std::uint64_t>(skip);
          if (v >= n) break;
          const NodeId w = static_cast<NodeId>(v);
          edges.push_back({u, w, oracle.query(u, w)});
        }
      }
    }
  }
  qg.queries = edges.size();
  qg.answers.reserve(edges.size() * 2);
  for (const SignedEdge& e : edges) qg.answers.emplace(pair_key(e.src, e.dst), e.sign);
  qg.graph = SignedGraph(n, std::move(edges));
  return qg;
}

}  // namespace nclust
