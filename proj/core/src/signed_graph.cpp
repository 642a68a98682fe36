#include "nclust/signed_graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "nclust/random.hpp"

namespace nclust {

namespace {

// Sorted-span membership lookup; spans are sorted by neighbor id.
const SignedGraph::Neighbor* find_neighbor(std::span<const SignedGraph::Neighbor> adj,
                                           NodeId id) {
  auto it = std::lower_bound(adj.begin(), adj.end(), id,
                             [](const SignedGraph::Neighbor& n, NodeId v) { return n.id < v; });
  if (it == adj.end() || it->id != id) return nullptr;
  return &*it;
}

void build_csr(NodeId n, const std::vector<std::pair<NodeId, SignedGraph::Neighbor>>& items,
               std::vector<SignedGraph::Neighbor>& flat, std::vector<std::uint32_t>& off) {
  off.assign(n + 1, 0);
  for (const auto& [u, nb] : items) off[u + 1]++;
  for (NodeId u = 0; u < n; ++u) off[u + 1] += off[u];
  flat.resize(items.size());
  std::vector<std::uint32_t> cursor(off.begin(), off.end() - 1);
  for (const auto& [u, nb] : items) flat[cursor[u]++] = nb;
  for (NodeId u = 0; u < n; ++u)
    std::sort(flat.begin() + off[u], flat.begin() + off[u + 1],
              [](const SignedGraph::Neighbor& a, const SignedGraph::Neighbor& b) {
                return a.id < b.id;
              });
}

}  // namespace

SignedGraph::SignedGraph(NodeId node_count, std::vector<SignedEdge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  std::vector<std::pair<NodeId, Neighbor>> outs, ins, unds;
  outs.reserve(edges_.size());
  ins.reserve(edges_.size());
  unds.reserve(2 * edges_.size());
  std::unordered_map<std::uint64_t, Sign> und_seen;
  und_seen.reserve(edges_.size() * 2);

  std::unordered_set<std::uint64_t> ordered_seen;
  ordered_seen.reserve(edges_.size() * 2);
  for (const SignedEdge& e : edges_) {
    if (e.src >= node_count_ || e.dst >= node_count_)
      throw std::invalid_argument("SignedGraph: edge endpoint out of range");
    if (e.src == e.dst) throw std::invalid_argument("SignedGraph: self-loop");
    if (e.sign != -1 && e.sign != 1) throw std::invalid_argument("SignedGraph: bad sign");
    if (!ordered_seen.insert((static_cast<std::uint64_t>(e.src) << 32) | e.dst).second)
      throw std::invalid_argument("SignedGraph: duplicate ordered pair");

    outs.push_back({e.src, {e.dst, e.sign}});
    ins.push_back({e.dst, {e.src, e.sign}});
    auto [it, fresh] = und_seen.try_emplace(pair_key(e.src, e.dst), e.sign);
    if (fresh) {
      unds.push_back({e.src, {e.dst, e.sign}});
      unds.push_back({e.dst, {e.src, e.sign}});
    } else if (it->second != e.sign) {
      ++und_sign_conflicts_;  // undirected view keeps the first-seen sign
    }
  }
  build_csr(node_count_, outs, out_flat_, out_off_);
  build_csr(node_count_, ins, in_flat_, in_off_);
  build_csr(node_count_, unds, und_flat_, und_off_);

  tallies_.assign(node_count_, {});
  for (const SignedEdge& e : edges_) {
    (e.sign == 1 ? tallies_[e.src].out_pos : tallies_[e.src].out_neg)++;
    (e.sign == 1 ? tallies_[e.dst].in_pos : tallies_[e.dst].in_neg)++;
  }
}

std::span<const SignedGraph::Neighbor> SignedGraph::out(NodeId u) const {
  return {out_flat_.data() + out_off_[u], out_off_[u + 1] - out_off_[u]};
}

std::span<const SignedGraph::Neighbor> SignedGraph::in(NodeId u) const {
  return {in_flat_.data() + in_off_[u], in_off_[u + 1] - in_off_[u]};
}

std::span<const SignedGraph::Neighbor> SignedGraph::neighbors(NodeId u) const {
  return {und_flat_.data() + und_off_[u], und_off_[u + 1] - und_off_[u]};
}

bool SignedGraph::has_edge(NodeId u, NodeId v) const { return find_neighbor(out(u), v); }

Sign SignedGraph::edge_sign(NodeId u, NodeId v) const {
  const Neighbor* nb = find_neighbor(out(u), v);
  if (!nb) throw std::out_of_range("SignedGraph: directed edge not found");
  return nb->sign;
}

bool SignedGraph::has_und_edge(NodeId u, NodeId v) const {
  return find_neighbor(neighbors(u), v);
}

Sign SignedGraph::und_sign(NodeId u, NodeId v) const {
  const Neighbor* nb = find_neighbor(neighbors(u), v);
  if (!nb) throw std::out_of_range("SignedGraph: undirected edge not found");
  return nb->sign;
}

std::uint64_t SignedGraph::original_id(NodeId v) const {
  return original_ids_.empty() ? v : original_ids_[v];
}

void SignedGraph::set_original_ids(std::vector<std::uint64_t> ids) {
  if (!ids.empty() && ids.size() != node_count_)
    throw std::invalid_argument("original id map size mismatch");
  original_ids_ = std::move(ids);
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("parse error at line " + std::to_string(line_no) + ": " + what);
}

bool parse_int(std::string_view tok, std::int64_t& out) {
  if (tok.empty()) return false;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (*first == '+') ++first;  // from_chars rejects leading '+'
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

LoadResult parse_snap_edgelist(std::istream& in) {
  IngestReport report;
  std::vector<SignedEdge> edges;
  std::vector<std::uint64_t> original_ids;
  std::unordered_map<std::uint64_t, NodeId> remap;
  std::unordered_map<std::uint64_t, Sign> kept_sign;  // ordered pair -> first sign

  auto intern = [&](std::int64_t raw) {
    auto [it, fresh] = remap.try_emplace(static_cast<std::uint64_t>(raw),
                                         static_cast<NodeId>(remap.size()));
    if (fresh) original_ids.push_back(static_cast<std::uint64_t>(raw));
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv(line);
    while (!sv.empty() && (sv.back() == '\r' || sv.back() == '\n')) sv.remove_suffix(1);
    std::size_t pos = sv.find_first_not_of(" \t");
    if (pos == std::string_view::npos) continue;
    if (sv[pos] == '#') continue;

    std::int64_t fields[3];
    int nf = 0;
    while (pos != std::string_view::npos) {
      std::size_t end = sv.find_first_of(" \t", pos);
      std::string_view tok = sv.substr(pos, end == std::string_view::npos ? end : end - pos);
      if (nf == 3) parse_fail(line_no, "expected 3 fields, got more");
      if (!parse_int(tok, fields[nf])) parse_fail(line_no, "not an integer: '" + std::string(tok) + "'");
      ++nf;
      pos = sv.find_first_not_of(" \t", end);
    }
    if (nf != 3) parse_fail(line_no, "expected 3 fields, got " + std::to_string(nf));
    if (fields[0] < 0 || fields[1] < 0) parse_fail(line_no, "negative node id");
    if (fields[2] != -1 && fields[2] != 1)
      parse_fail(line_no, "sign must be -1 or 1, got " + std::to_string(fields[2]));

    if (fields[0] == fields[1]) {
      ++report.self_loops_dropped;
      continue;
    }
    const NodeId u = intern(fields[0]);
    const NodeId v = intern(fields[1]);
    const Sign s = static_cast<Sign>(fields[2]);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    auto [it, fresh] = kept_sign.try_emplace(key, s);
    if (!fresh) {
      ++report.duplicates_dropped;  // keep-first rule
      if (it->second != s) ++report.sign_conflicts;
      continue;
    }
    edges.push_back({u, v, s});
  }

  report.nodes = remap.size();
  report.edges = edges.size();
  LoadResult result{SignedGraph(static_cast<NodeId>(remap.size()), std::move(edges)), report};
  result.graph.set_original_ids(std::move(original_ids));
  return result;
}

LoadResult load_snap_edgelist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return parse_snap_edgelist(in);
}

void save_snap_edgelist(const SignedGraph& graph, std::ostream& out) {
  for (const SignedEdge& e : graph.edges()) {
    out << graph.original_id(e.src) << '\t' << graph.original_id(e.dst) << '\t'
        << static_cast<int>(e.sign) << '\n';
  }
}

BalancedSample balance_edge_subset(const SignedGraph& graph,
                                   std::span<const std::uint32_t> candidates,
                                   std::uint64_t seed) {
  std::vector<std::uint32_t> pos, neg;
  for (std::uint32_t idx : candidates) {
    if (idx >= graph.edges().size())
      throw std::invalid_argument("balance_edge_subset: edge index out of range");
    (graph.edges()[idx].sign == 1 ? pos : neg).push_back(idx);
  }
  if (pos.empty() || neg.empty())
    throw std::invalid_argument("balanced sample needs both signs present");

  auto& majority = pos.size() >= neg.size() ? pos : neg;
  auto& minority = pos.size() >= neg.size() ? neg : pos;
  const std::size_t keep = minority.size();

  Rng rng(derive_seed(seed, 0x62616c616e6365ULL));
  // Partial Fisher-Yates: the first `keep` slots become a uniform subset.
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + rng.next_below(majority.size() - i);
    std::swap(majority[i], majority[j]);
  }
  majority.resize(keep);

  BalancedSample sample;
  sample.seed = seed;
  sample.edge_indices.reserve(2 * keep);
  sample.edge_indices.insert(sample.edge_indices.end(), minority.begin(), minority.end());
  sample.edge_indices.insert(sample.edge_indices.end(), majority.begin(), majority.end());
  std::sort(sample.edge_indices.begin(), sample.edge_indices.end());
  sample.positive = keep;
  sample.negative = keep;
  return sample;
}

BalancedSample make_balanced_sample(const SignedGraph& graph, std::uint64_t seed) {
  std::vector<std::uint32_t> all(graph.edges().size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  return balance_edge_subset(graph, all, seed);
}

}  // namespace nclust
