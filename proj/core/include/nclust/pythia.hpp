#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nclust/oracle.hpp"
#include "nclust/types.hpp"

namespace nclust {

// Set sizes for the vote-based seed-and-expand recovery.
struct PythiaConfig {
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  bool shuffle = false;          // pick A, B at seeded random positions
  std::uint64_t shuffle_seed = 0;
  bool flagged = false;          // sizes outside the theory regime

  // size_a = ceil(48 ln n / delta^2), size_b = ceil(24 ln n / delta^4).
  // When the formula sizes exceed n they are scaled down proportionally
  // to fit and the config is flagged.
  static PythiaConfig from_formula(std::size_t n, double delta);

  // Throws std::invalid_argument unless 2 <= size_a, 1 <= size_b and
  // size_a + size_b <= n.
  void validate(std::size_t n) const;
};

// Vote of mediator set S on whether u,v are in the same cluster.
struct VoteTally {
  NodeId u, v;
  std::size_t agreeing = 0;   // mediators with tau~(u,s) == tau~(v,s)
  std::size_t mediators = 0;  // |S|
  Sign bar_tau = 1;           // +1 iff agreeing >= |S|/2
};

// majority of { tau~(u,s) * tau~(v,s) : s in S }; ties are +1.
// Requires u != v, u,v not in S, S non-empty. 2|S| queries, cache-aware.
Sign vote_pair(NoisyOracle& oracle, NodeId u, NodeId v, std::span<const NodeId> mediators);
VoteTally vote_tally(NoisyOracle& oracle, NodeId u, NodeId v,
                     std::span<const NodeId> mediators);

// Symmetric +1/-1 labels over members 0..n-1 (upper triangle storage).
class PairLabels {
 public:
  explicit PairLabels(std::size_t n);
  std::size_t size() const { return n_; }
  Sign at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, Sign s);

 private:
  std::size_t index(std::size_t i, std::size_t j) const;
  std::size_t n_;
  std::vector<Sign> tri_;
};

// Largest connected component of the positive-label graph; ties broken
// by the smallest contained index. Returns member indices, ascending.
std::vector<std::size_t> largest_positive_component(const PairLabels& labels);

struct PythiaReport {
  Clustering clustering;
  std::uint64_t queries = 0;   // oracle query_count delta for this run
  std::size_t size_c = 0;      // seed component size
  bool flagged = false;
};

// Full recovery: cross-query A x B, label all pairs in A by mediated
// majority votes, take the largest positive component as seed C, then
// classify every remaining node by direct majority vote against C
// (strict majority; ties stay out). Returns (C-side, rest) with the
// C-side as cluster 0.
PythiaReport recover_pythia(NoisyOracle& oracle, std::size_t n, const PythiaConfig& config);

}  // namespace nclust
