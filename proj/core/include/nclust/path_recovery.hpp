#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "nclust/oracle.hpp"
#include "nclust/types.hpp"

namespace nclust {

// Sign of the vote sum; ties are +1. Throws std::invalid_argument on
// empty input.
Sign majority(std::span<const Sign> votes);

// Parameters of the non-adaptive path-based recovery.
struct PathConfig {
  std::size_t n = 0;
  double delta = 1.0;
  double epsilon = 0.0;     // 1 / sqrt(ln ln n)
  double avg_degree = 0.0;  // max(12 ln n / delta^4, (1/delta)^(4+(2+2e)/e))
  double p = 0.0;           // query-graph edge probability, avg_degree / n
  double diameter = 0.0;    // L = ln n / ln avg_degree
  std::size_t branching = 1;   // b, tree branching factor
  std::size_t tree_depth = 0;  // k; 0 = degenerate two-tree form
  std::size_t deep_depth = 1;  // gamma
  bool flagged = false;        // any size left the theorem regime

  static PathConfig from_formula(std::size_t n, double delta);

  // Gadget vertex demand for (branching, tree_depth, deep_depth),
  // saturating; used by the desk-scale feasibility reduction.
  static double gadget_vertex_demand(std::size_t b, std::size_t k, std::size_t g);

  void validate() const;
};

// Rooted tree stored level by level; node i at level l+1 is the child
// of node i / branching at level l.
struct TreeLevels {
  std::vector<std::vector<NodeId>> levels;

  std::size_t depth() const { return levels.empty() ? 0 : levels.size() - 1; }
  std::span<const NodeId> leaves() const { return levels.back(); }
  std::vector<std::size_t> shape() const;
};

// Tree-pair-plus-matched-paths subgraph used to estimate one pair's
// relative sign. For tree_depth == 0 the trees are the bare roots, the
// single leaf pair is (x,y) and the bundle holds every collected
// crossing path; for tree_depth >= 1 each leaf pair has exactly one
// path. Bundle paths are pairwise edge-disjoint and edge-disjoint from
// both trees.
struct PathGadget {
  NodeId x = 0, y = 0;
  std::size_t branching = 1;
  std::size_t tree_depth = 0;
  std::size_t deep_depth = 1;
  TreeLevels tree_x, tree_y;
  std::vector<std::pair<NodeId, NodeId>> leaf_pairs;
  // bundles[i] = paths for leaf pair i, each a node sequence from the
  // x-side leaf to the y-side leaf.
  std::vector<std::vector<std::vector<NodeId>>> bundles;

  std::vector<std::pair<NodeId, NodeId>> tree_edges() const;
  std::vector<std::pair<NodeId, NodeId>> path_edges() const;
};

enum class GadgetFailure {
  none,
  tree_x,     // shallow tree at x could not reach branching
  tree_y,
  deep_tree,  // a deep tree ran out of fresh vertices
  crossing,   // no edge between a matched leaf-set pair
};

const char* to_string(GadgetFailure f);

// Construction failure is a value, not a fault.
struct GadgetResult {
  std::optional<PathGadget> gadget;
  GadgetFailure failure = GadgetFailure::none;

  bool ok() const { return gadget.has_value(); }
};

GadgetResult build_gadget(const QueryGraph& qgraph, NodeId x, NodeId y,
                          const PathConfig& config);

// Per-level estimates produced while folding a gadget, root last.
struct EstimateTrace {
  std::vector<std::vector<Sign>> levels;  // levels[0] = leaf estimates
};

// Leaf estimates are majority (usually product) of path-edge answers;
// internal estimates fold majorities level by level up to the roots.
// Throws std::invalid_argument when an edge answer is missing.
Sign estimate_pair(const PathGadget& gadget,
                   const std::unordered_map<std::uint64_t, Sign>& answers,
                   EstimateTrace* trace = nullptr);
Sign estimate_pair(const PathGadget& gadget, const QueryGraph& qgraph,
                   EstimateTrace* trace = nullptr);

struct PathReport {
  Clustering clustering;
  std::uint64_t queries = 0;        // edges of the sampled query graph
  std::size_t gadget_failures = 0;  // pairs decided by the fallback
  bool flagged = false;
};

// Non-adaptive recovery: sample the query graph once, then estimate the
// relative sign of (node 0, v) for every v through a gadget. Pairs whose
// gadget construction fails fall back to a majority over edge-disjoint
// query-graph paths of length <= 3 (cluster 0 when none exist).
PathReport recover_paths(NoisyOracle& oracle, std::size_t n, const PathConfig& config);

// Empirical E[majority] of m iid +-1 coins with mean delta, one value
// per requested count. Counts must be odd (ties are outside the check).
struct BiasCurvePoint {
  std::size_t m;
  double empirical;
};
std::vector<BiasCurvePoint> majority_bias_curve(double delta,
                                                std::span<const std::size_t> counts,
                                                std::size_t trials,
                                                std::uint64_t seed);

// 2 * Pr[Bin(m, (1+delta)/2) > m/2] - 1 via log-space pmf summation.
double exact_majority_bias(std::size_t m, double delta);

}  // namespace nclust
