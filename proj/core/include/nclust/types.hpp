#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nclust {

using NodeId = std::uint32_t;
using Sign = std::int8_t;  // -1 or +1

struct SignedEdge {
  NodeId src = 0;
  NodeId dst = 0;
  Sign sign = 1;

  friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

// A bipartition of the node set, as returned by the recovery algorithms.
struct Clustering {
  std::vector<std::uint8_t> assignment;  // 0 or 1 per node

  std::size_t size() const { return assignment.size(); }
};

// Hidden two-coloring sigma: V -> {-1,+1}. Cluster R is sigma == -1,
// cluster B is sigma == +1.
class GroundTruth {
 public:
  GroundTruth() = default;
  explicit GroundTruth(std::vector<Sign> sigma);

  // First ceil(n/2) nodes red (-1), the rest blue (+1).
  static GroundTruth balanced(std::size_t n);
  // Exactly floor(n/2) red nodes at seeded random positions.
  static GroundTruth random_balanced(std::size_t n, std::uint64_t seed);
  // Independent fair coin per node.
  static GroundTruth random(std::size_t n, std::uint64_t seed);
  static GroundTruth uniform(std::size_t n, Sign sign);

  std::size_t size() const { return sigma_.size(); }
  Sign sigma(NodeId v) const { return sigma_[v]; }
  // sigma(u) * sigma(v): +1 same cluster, -1 different.
  Sign relation(NodeId u, NodeId v) const {
    return static_cast<Sign>(sigma_[u] * sigma_[v]);
  }

  std::vector<NodeId> red_set() const;
  std::vector<NodeId> blue_set() const;
  Clustering to_clustering() const;

 private:
  std::vector<Sign> sigma_;
};

// Fraction of nodes on which `found` matches `truth`, maximized over the
// two cluster-label mappings; 1.0 means exact recovery up to swap.
double clustering_agreement(const Clustering& found, const GroundTruth& truth);
double clustering_agreement(const Clustering& a, const Clustering& b);

}  // namespace nclust
