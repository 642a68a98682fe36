#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "nclust/signed_graph.hpp"
#include "nclust/types.hpp"

namespace nclust {

// Number of distinct common neighbors of u and v in the undirected view.
std::size_t embeddedness(const SignedGraph& graph, NodeId u, NodeId v);

// The 7 degree/embeddedness features of the target edge (u,v), computed
// with the target directed edge removed (leave-one-out).
struct DegreeFeatures {
  std::uint32_t d_out_pos_u = 0;
  std::uint32_t d_out_neg_u = 0;
  std::uint32_t d_in_pos_v = 0;
  std::uint32_t d_in_neg_v = 0;
  std::uint32_t d_out_u = 0;
  std::uint32_t d_in_v = 0;
  std::uint32_t embeddedness = 0;
};
DegreeFeatures degree_features(const SignedGraph& graph, NodeId u, NodeId v);

// Counts of the 16 two-edge directed signed configurations through
// common neighbors of (u,v); counts[t-1] holds type t. Every directed
// edge combination through a common neighbor contributes, so one
// neighbor can hit several types when parallel edges exist.
std::array<std::uint32_t, 16> triad_counts(const SignedGraph& graph, NodeId u, NodeId v);

// Edge-disjoint s-t paths found by the deterministic greedy search.
struct PathCollection {
  NodeId s = 0, t = 0;
  std::size_t length = 0;  // 0 = variable (length <= max was requested)
  std::vector<std::vector<NodeId>> paths;  // node sequences s..t
  std::vector<Sign> products;              // sign product per path

  std::size_t positive() const;
  std::size_t negative() const;
};

// Greedy edge-disjoint simple paths of exactly `length` edges (3 or 4)
// on the undirected view with the target edge {s,t} removed. BFS-order
// expansion by ascending node id; each found path retires its edges.
PathCollection greedy_disjoint_paths(const SignedGraph& graph, NodeId s, NodeId t,
                                     std::size_t length);

// Same greedy engine collecting paths of any length <= max_length
// (shortest first). `exclude_st` drops the undirected {s,t} edge; the
// recovery fallback keeps it, feature extraction removes it.
PathCollection greedy_paths_up_to(const SignedGraph& graph, NodeId s, NodeId t,
                                  std::size_t max_length, bool exclude_st);

// 27-dimensional feature record of a directed edge: 7 degree values,
// 16 triad counts, 4 path counts. The target edge is excluded from the
// graph throughout; its sign is the label, never a feature.
struct FeatureVector {
  DegreeFeatures degree;
  std::array<std::uint32_t, 16> triads{};
  std::uint32_t p3_pos = 0;
  std::uint32_t p3_neg = 0;
  std::uint32_t p4_pos = 0;
  std::uint32_t p4_neg = 0;

  std::array<double, 27> as_array() const;
};

// Column names, in the CSV/model order f1..f27.
const std::array<const char*, 27>& feature_names();

// Requires (u,v) to be a directed edge of the graph.
FeatureVector feature_vector(const SignedGraph& graph, NodeId u, NodeId v);

}  // namespace nclust
