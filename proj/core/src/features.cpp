#include "nclust/features.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "nclust/random.hpp"

namespace nclust {

namespace {

bool sorted_contains(std::span<const SignedGraph::Neighbor> adj, NodeId id) {
  auto it = std::lower_bound(adj.begin(), adj.end(), id,
                             [](const SignedGraph::Neighbor& n, NodeId v) { return n.id < v; });
  return it != adj.end() && it->id == id;
}

// Visit common neighbors of two sorted lists in ascending order. Skewed
// pairs (one hub, one ordinary node) gallop the short list through the
// long one; balanced pairs take the linear merge.
template <typename Visit>
void for_common_neighbors(std::span<const SignedGraph::Neighbor> a,
                          std::span<const SignedGraph::Neighbor> b, Visit&& visit) {
  if (a.size() > b.size()) {
    for_common_neighbors(b, a, std::forward<Visit>(visit));
    return;
  }
  if (a.size() * 32 < b.size()) {
    for (const auto& nb : a)
      if (sorted_contains(b, nb.id)) visit(nb.id);
    return;
  }
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].id < b[j].id) {
      ++i;
    } else if (a[i].id > b[j].id) {
      ++j;
    } else {
      visit(a[i].id);
      ++i;
      ++j;
    }
  }
}

}  // namespace

std::size_t embeddedness(const SignedGraph& graph, NodeId u, NodeId v) {
  std::size_t count = 0;
  for_common_neighbors(graph.neighbors(u), graph.neighbors(v), [&](NodeId) { ++count; });
  return count;
}

DegreeFeatures degree_features(const SignedGraph& graph, NodeId u, NodeId v) {
  // Whole-node tallies minus the target edge (leave-one-out); the
  // reverse edge, when present, legitimately stays in.
  const SignedGraph::DegreeTally& tu = graph.degree_tally(u);
  const SignedGraph::DegreeTally& tv = graph.degree_tally(v);
  DegreeFeatures f;
  f.d_out_pos_u = tu.out_pos;
  f.d_out_neg_u = tu.out_neg;
  f.d_in_pos_v = tv.in_pos;
  f.d_in_neg_v = tv.in_neg;
  if (graph.has_edge(u, v)) {
    const Sign s = graph.edge_sign(u, v);
    (s == 1 ? f.d_out_pos_u : f.d_out_neg_u)--;
    (s == 1 ? f.d_in_pos_v : f.d_in_neg_v)--;
  }
  f.d_out_u = f.d_out_pos_u + f.d_out_neg_u;
  f.d_in_v = f.d_in_pos_v + f.d_in_neg_v;
  f.embeddedness = static_cast<std::uint32_t>(embeddedness(graph, u, v));
  return f;
}

std::array<std::uint32_t, 16> triad_counts(const SignedGraph& graph, NodeId u, NodeId v) {
  std::array<std::uint32_t, 16> counts{};
  // Common neighbors ascend, so the four directed lists advance with
  // monotone cursors; galloped enumeration keeps hub endpoints cheap.
  const auto ou = graph.out(u);
  const auto iu = graph.in(u);
  const auto ov = graph.out(v);
  const auto iv = graph.in(v);
  std::size_t pou = 0, piu = 0, pov = 0, piv = 0;
  auto seek = [](std::span<const SignedGraph::Neighbor> adj, std::size_t& pos, NodeId w) {
    if (pos < adj.size() && adj[pos].id < w) {
      // Gallop forward, then binary search the bracketed range.
      std::size_t step = 1, hi = pos;
      while (hi < adj.size() && adj[hi].id < w) {
        pos = hi;
        hi += step;
        step *= 2;
      }
      hi = std::min(hi, adj.size());
      pos = std::lower_bound(adj.begin() + pos, adj.begin() + hi, w,
                             [](const SignedGraph::Neighbor& n, NodeId x) { return n.id < x; }) -
            adj.begin();
    }
    return pos < adj.size() && adj[pos].id == w;
  };
  for_common_neighbors(graph.neighbors(u), graph.neighbors(v), [&](NodeId w) {
    // Every present directed-edge combination through w contributes:
    // type = 8*(v->w) + 4*(w->u) + 2*(first sign -) + (second sign -) + 1.
    struct Arm {
      bool reversed;
      Sign sign;
    };
    Arm side_u[2];
    Arm side_v[2];
    std::size_t cu = 0, cv = 0;
    if (seek(ou, pou, w)) side_u[cu++] = {false, ou[pou].sign};  // u -> w
    if (seek(iu, piu, w)) side_u[cu++] = {true, iu[piu].sign};   // w -> u
    if (seek(iv, piv, w)) side_v[cv++] = {false, iv[piv].sign};  // w -> v
    if (seek(ov, pov, w)) side_v[cv++] = {true, ov[pov].sign};   // v -> w
    for (std::size_t a = 0; a < cu; ++a) {
      for (std::size_t c = 0; c < cv; ++c) {
        const std::size_t idx = 8 * (side_v[c].reversed ? 1 : 0) +
                                4 * (side_u[a].reversed ? 1 : 0) +
                                2 * (side_u[a].sign == -1 ? 1 : 0) +
                                (side_v[c].sign == -1 ? 1 : 0);
        ++counts[idx];
      }
    }
  });
  return counts;
}

std::size_t PathCollection::positive() const {
  std::size_t n = 0;
  for (Sign s : products) n += s == 1;
  return n;
}

std::size_t PathCollection::negative() const {
  std::size_t n = 0;
  for (Sign s : products) n += s == -1;
  return n;
}

namespace {

// Epoch-stamped scratch marks for the t-adjacency, shared per thread so
// hot loops avoid per-probe binary searches and per-call clears.
struct NeighborMarks {
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;
};
thread_local NeighborMarks t_marks;

// Deterministic greedy search for edge-disjoint simple s-t paths on the
// undirected view: ascending-id expansion, first found path per branch,
// found edges retired into a hash set. One pass per exact length; a
// taken path consumes its (s, w1) edge, so each first hop yields at most
// one path and the scan never needs to restart.
class GreedyPathSearch {
 public:
  GreedyPathSearch(const SignedGraph& g, NodeId s, NodeId t, bool exclude_st)
      : g_(g), s_(s), t_(t), exclude_st_(exclude_st) {
    if (s == t) throw std::invalid_argument("path search requires s != t");
    if (t_marks.stamp.size() < g.node_count()) t_marks.stamp.resize(g.node_count(), 0);
    ++t_marks.epoch;
    for (const auto& nb : g.neighbors(t)) t_marks.stamp[nb.id] = t_marks.epoch;
  }

  bool adjacent_to_t(NodeId w) const { return t_marks.stamp[w] == t_marks.epoch; }

  void collect_exact(std::size_t length, PathCollection& out) {
    // Every path consumes one unused t-incident edge, so the scan can
    // stop for good once none remain.
    t_free_ = 0;
    for (const auto& nb : g_.neighbors(t_)) {
      if (exclude_st_ && nb.id == s_) continue;
      if (!used_.contains(pair_key(nb.id, t_))) ++t_free_;
    }
    switch (length) {
      case 1: {
        if (t_free_ > 0 && free_edge(s_, t_)) take({s_, t_}, out);
        break;
      }
      case 2: {
        for (const auto& w : g_.neighbors(s_)) {
          if (t_free_ == 0) break;
          if (w.id == t_ || !closes(w.id)) continue;
          if (free_inner(s_, w.id)) take({s_, w.id, t_}, out);
        }
        break;
      }
      case 3: {
        for (const auto& w1 : g_.neighbors(s_)) {
          if (t_free_ == 0) break;
          if (w1.id == t_ || !free_inner(s_, w1.id)) continue;
          for (const auto& w2 : g_.neighbors(w1.id)) {
            // Cheap stamp test first; the hash probes only run on hits.
            if (w2.id == s_ || w2.id == t_ || !closes(w2.id)) continue;
            if (free_inner(w1.id, w2.id)) {
              take({s_, w1.id, w2.id, t_}, out);
              break;  // (s, w1) is spent
            }
          }
        }
        break;
      }
      case 4: {
        for (const auto& w1 : g_.neighbors(s_)) {
          if (t_free_ == 0) break;
          if (w1.id == t_ || !free_inner(s_, w1.id)) continue;
          bool taken = false;
          for (const auto& w2 : g_.neighbors(w1.id)) {
            if (taken) break;
            if (w2.id == s_ || w2.id == t_ || !free_inner(w1.id, w2.id)) continue;
            for (const auto& w3 : g_.neighbors(w2.id)) {
              if (w3.id == w1.id || !closes(w3.id)) continue;
              if (w3.id == s_ || w3.id == t_) continue;
              if (!free_inner(w2.id, w3.id)) continue;
              take({s_, w1.id, w2.id, w3.id, t_}, out);
              taken = true;
              break;
            }
          }
        }
        break;
      }
      default:
        throw std::invalid_argument("path search supports lengths 1..4");
    }
  }

 private:
  bool free_edge(NodeId a, NodeId b) const {
    if (exclude_st_ && ((a == s_ && b == t_) || (a == t_ && b == s_))) return false;
    if (!g_.has_und_edge(a, b)) return false;
    return !used_.contains(pair_key(a, b));
  }

  // Existence already known: `a` came off an adjacency list.
  bool free_inner(NodeId a, NodeId b) const { return !used_.contains(pair_key(a, b)); }

  // Closing hop onto t; never reached with w == s, so the excluded
  // target edge cannot slip in here.
  bool closes(NodeId w) const {
    return adjacent_to_t(w) && !used_.contains(pair_key(w, t_));
  }

  void take(std::vector<NodeId> path, PathCollection& out) {
    std::int32_t prod = 1;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      used_.insert(pair_key(path[i], path[i + 1]));
      prod *= g_.und_sign(path[i], path[i + 1]);
    }
    --t_free_;  // a simple path touches t exactly once, at its closing edge
    out.products.push_back(static_cast<Sign>(prod));
    out.paths.push_back(std::move(path));
  }

  const SignedGraph& g_;
  NodeId s_, t_;
  bool exclude_st_;
  std::size_t t_free_ = 0;
  std::unordered_set<std::uint64_t> used_;
};

}  // namespace

PathCollection greedy_disjoint_paths(const SignedGraph& graph, NodeId s, NodeId t,
                                     std::size_t length) {
  if (length != 3 && length != 4)
    throw std::invalid_argument("greedy_disjoint_paths: length must be 3 or 4");
  PathCollection out;
  out.s = s;
  out.t = t;
  out.length = length;
  GreedyPathSearch search(graph, s, t, /*exclude_st=*/true);
  search.collect_exact(length, out);
  return out;
}

PathCollection greedy_paths_up_to(const SignedGraph& graph, NodeId s, NodeId t,
                                  std::size_t max_length, bool exclude_st) {
  if (max_length < 1 || max_length > 4)
    throw std::invalid_argument("greedy_paths_up_to: max length must be 1..4");
  PathCollection out;
  out.s = s;
  out.t = t;
  out.length = 0;
  GreedyPathSearch search(graph, s, t, exclude_st);
  for (std::size_t len = 1; len <= max_length; ++len) search.collect_exact(len, out);
  return out;
}

const std::array<const char*, 27>& feature_names() {
  static const std::array<const char*, 27> names = {
      "d_out_pos_u", "d_out_neg_u", "d_in_pos_v", "d_in_neg_v", "d_out_u", "d_in_v",
      "embeddedness", "triad_1", "triad_2", "triad_3", "triad_4", "triad_5", "triad_6",
      "triad_7", "triad_8", "triad_9", "triad_10", "triad_11", "triad_12", "triad_13",
      "triad_14", "triad_15", "triad_16", "p3_pos", "p3_neg", "p4_pos", "p4_neg"};
  return names;
}

std::array<double, 27> FeatureVector::as_array() const {
  std::array<double, 27> a{};
  a[0] = degree.d_out_pos_u;
  a[1] = degree.d_out_neg_u;
  a[2] = degree.d_in_pos_v;
  a[3] = degree.d_in_neg_v;
  a[4] = degree.d_out_u;
  a[5] = degree.d_in_v;
  a[6] = degree.embeddedness;
  for (std::size_t i = 0; i < 16; ++i) a[7 + i] = triads[i];
  a[23] = p3_pos;
  a[24] = p3_neg;
  a[25] = p4_pos;
  a[26] = p4_neg;
  return a;
}

FeatureVector feature_vector(const SignedGraph& graph, NodeId u, NodeId v) {
  if (!graph.has_edge(u, v))
    throw std::invalid_argument("feature_vector: (u,v) must be a directed edge");
  FeatureVector fv;
  fv.degree = degree_features(graph, u, v);
  fv.triads = triad_counts(graph, u, v);
  const PathCollection p3 = greedy_disjoint_paths(graph, u, v, 3);
  const PathCollection p4 = greedy_disjoint_paths(graph, u, v, 4);
  fv.p3_pos = static_cast<std::uint32_t>(p3.positive());
  fv.p3_neg = static_cast<std::uint32_t>(p3.negative());
  fv.p4_pos = static_cast<std::uint32_t>(p4.positive());
  fv.p4_neg = static_cast<std::uint32_t>(p4.negative());
  return fv;
}

}  // namespace nclust
