#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nclust/types.hpp"

namespace nclust {

// Directed signed edge list with an undirected adjacency view.
// Immutable after construction; safe for concurrent reads.
class SignedGraph {
 public:
  struct Neighbor {
    NodeId id;
    Sign sign;
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
  };

  SignedGraph() = default;
  // `edges` must be clean: no self-loops, no duplicate ordered pairs,
  // all endpoints < node_count. Throws std::invalid_argument otherwise.
  SignedGraph(NodeId node_count, std::vector<SignedEdge> edges);

  NodeId node_count() const { return node_count_; }
  const std::vector<SignedEdge>& edges() const { return edges_; }

  // Adjacency views, each sorted by neighbor id.
  std::span<const Neighbor> out(NodeId u) const;
  std::span<const Neighbor> in(NodeId u) const;
  std::span<const Neighbor> neighbors(NodeId u) const;  // undirected view

  bool has_edge(NodeId u, NodeId v) const;  // directed
  // Sign of directed edge (u,v); throws std::out_of_range if absent.
  Sign edge_sign(NodeId u, NodeId v) const;

  bool has_und_edge(NodeId u, NodeId v) const;
  // Undirected sign: first-seen rule when (u,v) and (v,u) disagree.
  Sign und_sign(NodeId u, NodeId v) const;

  // Whole-node signed degree tallies (no leave-one-out applied).
  struct DegreeTally {
    std::uint32_t out_pos = 0, out_neg = 0, in_pos = 0, in_neg = 0;
  };
  const DegreeTally& degree_tally(NodeId u) const { return tallies_[u]; }

  // Number of unordered pairs where (u,v) and (v,u) carry opposite signs
  // and were collapsed to the first-seen sign in the undirected view.
  std::size_t und_sign_conflicts() const { return und_sign_conflicts_; }

  // Original node ids from ingestion, if this graph was loaded from a
  // file with non-dense ids. Empty for synthetic graphs (identity map).
  const std::vector<std::uint64_t>& original_ids() const { return original_ids_; }
  std::uint64_t original_id(NodeId v) const;
  void set_original_ids(std::vector<std::uint64_t> ids);

 private:
  NodeId node_count_ = 0;
  std::vector<SignedEdge> edges_;
  std::vector<Neighbor> out_flat_, in_flat_, und_flat_;
  std::vector<std::uint32_t> out_off_, in_off_, und_off_;
  std::vector<DegreeTally> tallies_;
  std::size_t und_sign_conflicts_ = 0;
  std::vector<std::uint64_t> original_ids_;
};

struct IngestReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;  // post-dedup
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t sign_conflicts = 0;
};

struct LoadResult {
  SignedGraph graph;
  IngestReport report;
};

// Parse whitespace-separated `src dst sign` lines; '#' starts a comment
// line; sign is -1, 1 or +1. Throws std::runtime_error with the line
// number on malformed input (sign 0 is rejected). Self-loops are
// dropped, duplicate ordered pairs keep the first occurrence, node ids
// are remapped to dense 0..n-1 in first-appearance order.
LoadResult parse_snap_edgelist(std::istream& in);
LoadResult load_snap_edgelist(const std::string& path);

// Writes `src dst sign` lines using original ids; reloading yields an
// identical edge set.
void save_snap_edgelist(const SignedGraph& graph, std::ostream& out);

// Edge subset with equal counts of each sign.
struct BalancedSample {
  std::vector<std::uint32_t> edge_indices;  // into graph.edges(), ascending
  std::uint64_t seed = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
};

// Keeps all minority-sign edges and uniformly subsamples the majority
// sign to the same count. Throws std::invalid_argument when either sign
// is absent.
BalancedSample make_balanced_sample(const SignedGraph& graph, std::uint64_t seed);

// Same balancing rule restricted to a candidate subset of edge indices.
BalancedSample balance_edge_subset(const SignedGraph& graph,
                                   std::span<const std::uint32_t> candidates,
                                   std::uint64_t seed);

}  // namespace nclust
