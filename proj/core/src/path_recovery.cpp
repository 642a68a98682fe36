#include "nclust/path_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "nclust/features.hpp"
#include "nclust/random.hpp"

namespace nclust {

Sign majority(std::span<const Sign> votes) {
  if (votes.empty()) throw std::invalid_argument("majority of an empty vote set");
  std::int64_t sum = 0;
  for (Sign v : votes) sum += v;
  return sum >= 0 ? Sign{1} : Sign{-1};
}

double PathConfig::gadget_vertex_demand(std::size_t b, std::size_t k, std::size_t g) {
  const double bd = static_cast<double>(b);
  auto geom = [bd](std::size_t depth) {  // b + b^2 + ... + b^depth
    double total = 0.0, term = 1.0;
    for (std::size_t i = 0; i < depth; ++i) {
      term *= bd;
      total += term;
      if (total > 1e18) return 1e18;
    }
    return total;
  };
  const double shallow = geom(k);
  const double leaves = k == 0 ? 1.0 : std::min(1e18, std::pow(bd, static_cast<double>(k)));
  const double deep = geom(g);
  return std::min(1e18, 2.0 + 2.0 * shallow + 2.0 * leaves * deep);
}

PathConfig PathConfig::from_formula(std::size_t n, double delta) {
  if (n < 3) throw std::invalid_argument("path recovery needs n >= 3");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("bias delta must be in (0, 1]");

  PathConfig c;
  c.n = n;
  c.delta = delta;
  const double ln_n = std::log(static_cast<double>(n));
  c.epsilon = 1.0 / std::sqrt(std::log(ln_n));
  const double d4 = delta * delta * delta * delta;

  double avg = std::max(12.0 * ln_n / d4,
                        std::pow(1.0 / delta, 4.0 + (2.0 + 2.0 * c.epsilon) / c.epsilon));
  if (avg > static_cast<double>(n - 1)) {
    avg = static_cast<double>(n - 1);
    c.flagged = true;
  }
  c.avg_degree = avg;
  c.p = std::min(1.0, avg / static_cast<double>(n));
  c.diameter = ln_n / std::log(avg);

  std::size_t b = static_cast<std::size_t>(std::ceil(4.0 * ln_n / d4));
  if (b % 2 == 0) ++b;  // odd branching keeps the recursion tie-free
  const double kl = c.epsilon * c.diameter;
  const double gl = (0.5 + c.epsilon) * c.diameter;
  if (kl < 1.0) c.flagged = true;
  std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(kl)));
  std::size_t g = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(gl)));
  if (g < k) g = k;

  // Desk-scale feasibility: the literal constants demand more fresh
  // vertices per gadget than exist at practical n. Reduce the tree
  // depth first (k = 0 is the degenerate two-tree form), then the deep
  // depth, then the branching, until a gadget fits in n/2 vertices.
  const double budget = static_cast<double>(n) / 2.0;
  while (gadget_vertex_demand(b, k, g) > budget) {
    if (k > 0) {
      --k;
    } else if (g > 1) {
      --g;
    } else if (b > 3) {
      b -= 2;
    } else {
      break;
    }
    c.flagged = true;
  }
  c.branching = b;
  c.tree_depth = k;
  c.deep_depth = g;
  return c;
}

void PathConfig::validate() const {
  if (n < 2) throw std::invalid_argument("path config: n >= 2 required");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("path config: delta in (0, 1] required");
  if (branching < 1) throw std::invalid_argument("path config: branching >= 1 required");
  if (deep_depth < 1) throw std::invalid_argument("path config: deep depth >= 1 required");
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("path config: edge probability in (0, 1] required");
}

std::vector<std::size_t> TreeLevels::shape() const {
  std::vector<std::size_t> s;
  s.reserve(levels.size());
  for (const auto& level : levels) s.push_back(level.size());
  return s;
}

std::vector<std::pair<NodeId, NodeId>> PathGadget::tree_edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const TreeLevels* tree : {&tree_x, &tree_y}) {
    for (std::size_t l = 0; l + 1 < tree->levels.size(); ++l) {
      for (std::size_t j = 0; j < tree->levels[l + 1].size(); ++j)
        out.emplace_back(tree->levels[l][j / branching], tree->levels[l + 1][j]);
    }
  }
  return out;
}

std::vector<std::pair<NodeId, NodeId>> PathGadget::path_edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& bundle : bundles)
    for (const auto& path : bundle)
      for (std::size_t i = 0; i + 1 < path.size(); ++i)
        out.emplace_back(path[i], path[i + 1]);
  return out;
}

const char* to_string(GadgetFailure f) {
  switch (f) {
    case GadgetFailure::none: return "none";
    case GadgetFailure::tree_x: return "tree_x";
    case GadgetFailure::tree_y: return "tree_y";
    case GadgetFailure::deep_tree: return "deep_tree";
    case GadgetFailure::crossing: return "crossing";
  }
  return "?";
}

namespace {

// Tree grown breadth-first with exactly `branching` children per node;
// child j of level-l node i sits at index i*branching + j on level l+1.
struct Grower {
  const SignedGraph& g;
  std::vector<std::uint8_t>& used;
  std::size_t branching;

  // Grows to `depth` levels below root. `admit_shared` (degenerate form
  // only) lets final-level candidates reuse x-side leaves as meeting
  // vertices. Returns false when some node cannot reach the branching.
  bool grow(NodeId root, std::size_t depth, TreeLevels& tree,
            const std::unordered_map<NodeId, std::size_t>* shareable,
            std::unordered_set<NodeId>* adopted) {
    tree.levels.assign(1, {root});
    for (std::size_t l = 0; l < depth; ++l) {
      std::vector<NodeId> next;
      next.reserve(tree.levels[l].size() * branching);
      const bool leaf_level = l + 1 == depth;
      for (NodeId u : tree.levels[l]) {
        std::size_t picked = 0;
        for (const SignedGraph::Neighbor& nb : g.neighbors(u)) {
          if (picked == branching) break;
          const bool fresh = !used[nb.id];
          const bool share = leaf_level && shareable && shareable->contains(nb.id) &&
                             adopted && !adopted->contains(nb.id);
          if (!fresh && !share) continue;
          if (fresh) {
            used[nb.id] = 1;
          } else {
            adopted->insert(nb.id);
          }
          next.push_back(nb.id);
          ++picked;
        }
        if (picked < branching) return false;
      }
      tree.levels.push_back(std::move(next));
    }
    return true;
  }
};

// Edges on the root-to-leaf branch of `leaf_idx` in a full tree.
void branch_edges(const TreeLevels& tree, std::size_t branching, std::size_t leaf_idx,
                  std::vector<std::pair<NodeId, NodeId>>& out) {
  out.clear();
  std::size_t idx = leaf_idx;
  for (std::size_t l = tree.levels.size() - 1; l > 0; --l) {
    out.emplace_back(tree.levels[l - 1][idx / branching], tree.levels[l][idx]);
    idx /= branching;
  }
  std::reverse(out.begin(), out.end());
}

// Node sequence root..leaf.
std::vector<NodeId> branch_nodes(const TreeLevels& tree, std::size_t branching,
                                 std::size_t leaf_idx) {
  std::vector<NodeId> nodes;
  std::size_t idx = leaf_idx;
  for (std::size_t l = tree.levels.size(); l-- > 0;) {
    nodes.push_back(tree.levels[l][idx]);
    idx /= branching;
  }
  std::reverse(nodes.begin(), nodes.end());
  return nodes;
}

}  // namespace

GadgetResult build_gadget(const QueryGraph& qgraph, NodeId x, NodeId y,
                          const PathConfig& config) {
  if (x == y) throw std::invalid_argument("build_gadget: x != y required");
  const SignedGraph& g = qgraph.graph;
  if (x >= g.node_count() || y >= g.node_count())
    throw std::invalid_argument("build_gadget: node out of range");

  const std::size_t b = config.branching;
  const std::size_t k = config.tree_depth;
  const std::size_t gamma = config.deep_depth;

  std::vector<std::uint8_t> used(g.node_count(), 0);
  used[x] = used[y] = 1;
  Grower grower{g, used, b};

  PathGadget gadget;
  gadget.x = x;
  gadget.y = y;
  gadget.branching = b;
  gadget.tree_depth = k;
  gadget.deep_depth = gamma;

  if (k == 0) {
    // Degenerate form: two depth-gamma trees grown straight from the
    // roots; the single leaf pair (x,y) gets a bundle of edge-disjoint
    // crossing paths, majority-combined by the estimator. The y-side
    // tree may adopt an x-side leaf as a meeting vertex (path length
    // 2*gamma instead of 2*gamma+1).
    gadget.tree_x.levels = {{x}};
    gadget.tree_y.levels = {{y}};
    gadget.leaf_pairs = {{x, y}};

    TreeLevels deep_x, deep_y;
    if (!grower.grow(x, gamma, deep_x, nullptr, nullptr))
      return {std::nullopt, GadgetFailure::tree_x};
    std::unordered_map<NodeId, std::size_t> x_leaf_slot;
    const auto x_leaves = deep_x.leaves();
    for (std::size_t i = 0; i < x_leaves.size(); ++i) x_leaf_slot.emplace(x_leaves[i], i);
    std::unordered_set<NodeId> adopted;
    if (!grower.grow(y, gamma, deep_y, &x_leaf_slot, &adopted))
      return {std::nullopt, GadgetFailure::tree_y};

    const auto y_leaves = deep_y.leaves();
    std::unordered_map<NodeId, std::size_t> y_leaf_slot;
    for (std::size_t j = 0; j < y_leaves.size(); ++j) y_leaf_slot.try_emplace(y_leaves[j], j);

    std::unordered_set<std::uint64_t> used_edges;
    std::vector<std::vector<NodeId>> bundle;
    std::vector<std::pair<NodeId, NodeId>> bx, by;

    auto admissible = [&](const std::vector<std::pair<NodeId, NodeId>>& edges) {
      for (const auto& [a, c] : edges)
        if (used_edges.contains(pair_key(a, c))) return false;
      return true;
    };
    auto retire = [&](const std::vector<std::pair<NodeId, NodeId>>& edges) {
      for (const auto& [a, c] : edges) used_edges.insert(pair_key(a, c));
    };

    // Meeting-vertex paths first (ascending x-leaf slot), then crossing
    // edges in scan order.
    for (std::size_t i = 0; i < x_leaves.size(); ++i) {
      const NodeId a = x_leaves[i];
      auto jt = y_leaf_slot.find(a);
      if (jt == y_leaf_slot.end()) continue;
      branch_edges(deep_x, b, i, bx);
      branch_edges(deep_y, b, jt->second, by);
      if (!admissible(bx) || !admissible(by)) continue;
      retire(bx);
      retire(by);
      std::vector<NodeId> path = branch_nodes(deep_x, b, i);  // x .. a
      std::vector<NodeId> back = branch_nodes(deep_y, b, jt->second);
      for (std::size_t t = back.size() - 1; t-- > 0;) path.push_back(back[t]);  // a .. y
      bundle.push_back(std::move(path));
    }
    for (std::size_t i = 0; i < x_leaves.size(); ++i) {
      const NodeId a = x_leaves[i];
      for (const SignedGraph::Neighbor& nb : g.neighbors(a)) {
        auto jt = y_leaf_slot.find(nb.id);
        if (jt == y_leaf_slot.end() || nb.id == a) continue;
        if (used_edges.contains(pair_key(a, nb.id))) continue;
        branch_edges(deep_x, b, i, bx);
        branch_edges(deep_y, b, jt->second, by);
        if (!admissible(bx) || !admissible(by)) continue;
        retire(bx);
        retire(by);
        used_edges.insert(pair_key(a, nb.id));
        std::vector<NodeId> path = branch_nodes(deep_x, b, i);
        std::vector<NodeId> back = branch_nodes(deep_y, b, jt->second);
        for (std::size_t t = back.size(); t-- > 0;) path.push_back(back[t]);
        bundle.push_back(std::move(path));
        break;  // this x-branch is spent; move to the next leaf
      }
    }
    if (bundle.empty()) return {std::nullopt, GadgetFailure::crossing};
    gadget.bundles.push_back(std::move(bundle));
    return {std::move(gadget), GadgetFailure::none};
  }

  // Standard form: two isomorphic shallow trees of depth k, then deep
  // trees of depth gamma from each matched leaf pair, one crossing edge
  // per pair.
  if (!grower.grow(x, k, gadget.tree_x, nullptr, nullptr))
    return {std::nullopt, GadgetFailure::tree_x};
  if (!grower.grow(y, k, gadget.tree_y, nullptr, nullptr))
    return {std::nullopt, GadgetFailure::tree_y};

  const auto x_leaves = gadget.tree_x.leaves();
  const auto y_leaves = gadget.tree_y.leaves();
  gadget.leaf_pairs.reserve(x_leaves.size());
  for (std::size_t i = 0; i < x_leaves.size(); ++i)
    gadget.leaf_pairs.emplace_back(x_leaves[i], y_leaves[i]);

  std::vector<std::uint8_t> in_y_leaves(g.node_count(), 0);
  gadget.bundles.reserve(gadget.leaf_pairs.size());
  for (const auto& [lx, ly] : gadget.leaf_pairs) {
    TreeLevels deep_x, deep_y;
    if (!grower.grow(lx, gamma, deep_x, nullptr, nullptr))
      return {std::nullopt, GadgetFailure::deep_tree};
    if (!grower.grow(ly, gamma, deep_y, nullptr, nullptr))
      return {std::nullopt, GadgetFailure::deep_tree};

    const auto xi = deep_x.leaves();
    const auto yi = deep_y.leaves();
    for (NodeId c : yi) in_y_leaves[c] = 1;
    std::size_t found_i = 0;
    NodeId found_b = 0;
    bool found = false;
    for (std::size_t i = 0; i < xi.size() && !found; ++i) {
      for (const SignedGraph::Neighbor& nb : g.neighbors(xi[i])) {
        if (in_y_leaves[nb.id]) {
          found_i = i;
          found_b = nb.id;
          found = true;
          break;
        }
      }
    }
    for (NodeId c : yi) in_y_leaves[c] = 0;
    if (!found) return {std::nullopt, GadgetFailure::crossing};

    std::size_t y_slot = 0;
    for (std::size_t j = 0; j < yi.size(); ++j)
      if (yi[j] == found_b) {
        y_slot = j;
        break;
      }
    std::vector<NodeId> path = branch_nodes(deep_x, b, found_i);  // lx .. crossing
    std::vector<NodeId> back = branch_nodes(deep_y, b, y_slot);   // ly .. crossing
    for (std::size_t t = back.size(); t-- > 0;) path.push_back(back[t]);
    gadget.bundles.push_back({std::move(path)});
  }
  return {std::move(gadget), GadgetFailure::none};
}

namespace {

Sign answer_or_throw(const std::unordered_map<std::uint64_t, Sign>& answers, NodeId u,
                     NodeId v) {
  auto it = answers.find(pair_key(u, v));
  if (it == answers.end())
    throw std::invalid_argument("estimate_pair: missing edge answer for (" +
                                std::to_string(u) + "," + std::to_string(v) + ")");
  return it->second;
}

}  // namespace

Sign estimate_pair(const PathGadget& gadget,
                   const std::unordered_map<std::uint64_t, Sign>& answers,
                   EstimateTrace* trace) {
  if (trace) trace->levels.clear();

  // Leaf estimates: majority of path products (a single product in the
  // standard form).
  std::vector<Sign> current;
  current.reserve(gadget.leaf_pairs.size());
  std::vector<Sign> votes;
  for (const auto& bundle : gadget.bundles) {
    votes.clear();
    for (const auto& path : bundle) {
      std::int32_t prod = 1;
      for (std::size_t i = 0; i + 1 < path.size(); ++i)
        prod *= answer_or_throw(answers, path[i], path[i + 1]);
      votes.push_back(static_cast<Sign>(prod));
    }
    current.push_back(majority(votes));
  }
  if (trace) trace->levels.push_back(current);

  // Fold the tree levels: each node pair takes the majority over its
  // children's collapsed estimates.
  const std::size_t b = gadget.branching;
  for (std::size_t l = gadget.tree_depth; l-- > 0;) {
    const auto& ux = gadget.tree_x.levels[l];
    const auto& uy = gadget.tree_y.levels[l];
    const auto& cx = gadget.tree_x.levels[l + 1];
    const auto& cy = gadget.tree_y.levels[l + 1];
    std::vector<Sign> next(ux.size());
    for (std::size_t i = 0; i < ux.size(); ++i) {
      votes.clear();
      for (std::size_t j = i * b; j < (i + 1) * b; ++j) {
        const Sign down = answer_or_throw(answers, ux[i], cx[j]);
        const Sign up = answer_or_throw(answers, cy[j], uy[i]);
        votes.push_back(static_cast<Sign>(down * current[j] * up));
      }
      next[i] = majority(votes);
    }
    current = std::move(next);
    if (trace) trace->levels.push_back(current);
  }
  return current[0];
}

Sign estimate_pair(const PathGadget& gadget, const QueryGraph& qgraph, EstimateTrace* trace) {
  return estimate_pair(gadget, qgraph.answers, trace);
}

namespace {

// Fallback for pairs whose gadget construction failed: majority over
// greedy edge-disjoint query-graph paths of length <= 3 (the direct
// query answer counts as a length-1 path); no paths puts the node in
// cluster 0.
Sign fallback_sign(const QueryGraph& qgraph, NodeId r, NodeId v) {
  const PathCollection paths = greedy_paths_up_to(qgraph.graph, r, v, 3, false);
  if (paths.products.empty()) return Sign{1};
  return majority(paths.products);
}

}  // namespace

PathReport recover_paths(NoisyOracle& oracle, std::size_t n, const PathConfig& config) {
  config.validate();
  if (n > oracle.universe_size())
    throw std::invalid_argument("recover_paths: n exceeds oracle universe");

  // Non-adaptive: every query happens here, before any estimation.
  QueryGraph qgraph = sample_query_graph(oracle, static_cast<NodeId>(n), config.p);

  PathReport report;
  report.queries = qgraph.queries;
  report.flagged = config.flagged;
  report.clustering.assignment.assign(n, 0);

  const NodeId root = 0;
  for (NodeId v = 1; v < n; ++v) {
    GadgetResult built = build_gadget(qgraph, root, v, config);
    Sign z;
    if (built.ok()) {
      z = estimate_pair(*built.gadget, qgraph);
    } else {
      ++report.gadget_failures;
      z = fallback_sign(qgraph, root, v);
    }
    report.clustering.assignment[v] = z == 1 ? 0 : 1;
  }
  return report;
}

std::vector<BiasCurvePoint> majority_bias_curve(double delta,
                                                std::span<const std::size_t> counts,
                                                std::size_t trials, std::uint64_t seed) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("majority_bias_curve: delta in (0, 1] required");
  if (trials == 0) throw std::invalid_argument("majority_bias_curve: trials >= 1 required");
  for (std::size_t m : counts)
    if (m % 2 == 0)
      throw std::invalid_argument("majority_bias_curve: counts must be odd (ties excluded)");

  const double p = (1.0 + delta) / 2.0;
  std::vector<BiasCurvePoint> curve;
  curve.reserve(counts.size());
  for (std::size_t m : counts) {
    Rng rng(derive_seed(seed, 0xb1a5ULL * (m + 1)));
    std::int64_t total = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      std::size_t heads = 0;
      for (std::size_t i = 0; i < m; ++i) heads += rng.bernoulli(p);
      total += 2 * heads > m ? 1 : -1;
    }
    curve.push_back({m, static_cast<double>(total) / static_cast<double>(trials)});
  }
  return curve;
}

double exact_majority_bias(std::size_t m, double delta) {
  if (m == 0 || m % 2 == 0)
    throw std::invalid_argument("exact_majority_bias: m must be odd");
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("exact_majority_bias: delta in [0, 1] required");
  const double p = (1.0 + delta) / 2.0;
  if (p >= 1.0) return 1.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  double tail = 0.0;  // Pr[Bin(m, p) > m/2]
  for (std::size_t j = m / 2 + 1; j <= m; ++j) {
    const double lc = std::lgamma(static_cast<double>(m) + 1.0) -
                      std::lgamma(static_cast<double>(j) + 1.0) -
                      std::lgamma(static_cast<double>(m - j) + 1.0);
    tail += std::exp(lc + static_cast<double>(j) * lp + static_cast<double>(m - j) * lq);
  }
  return 2.0 * tail - 1.0;
}

}  // namespace nclust
