#include "nclust/pythia.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nclust/random.hpp"

namespace nclust {

PythiaConfig PythiaConfig::from_formula(std::size_t n, double delta) {
  if (n < 3) throw std::invalid_argument("pythia needs n >= 3");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("bias delta must be in (0, 1]");
  const double ln_n = std::log(static_cast<double>(n));
  const double d2 = delta * delta;
  double a = std::ceil(48.0 * ln_n / d2);
  double b = std::ceil(24.0 * ln_n / (d2 * d2));

  PythiaConfig config;
  if (a + b > static_cast<double>(n)) {
    // Desk-scale override: the theorem constants do not fit; shrink
    // proportionally and flag the run.
    const double f = static_cast<double>(n) / (a + b);
    a = std::floor(a * f);
    b = std::floor(b * f);
    config.flagged = true;
  }
  config.size_a = std::max<std::size_t>(2, static_cast<std::size_t>(a));
  config.size_b = std::max<std::size_t>(1, static_cast<std::size_t>(b));
  while (config.size_a + config.size_b > n && config.size_b > 1) --config.size_b;
  while (config.size_a + config.size_b > n && config.size_a > 2) --config.size_a;
  return config;
}

void PythiaConfig::validate(std::size_t n) const {
  if (size_a < 2) throw std::invalid_argument("size_a must be >= 2");
  if (size_b < 1) throw std::invalid_argument("size_b must be >= 1");
  if (size_a + size_b > n)
    throw std::invalid_argument("size_a + size_b exceeds the node count");
}

namespace {

Sign majority_sign(std::int64_t sum) { return sum >= 0 ? Sign{1} : Sign{-1}; }

}  // namespace

VoteTally vote_tally(NoisyOracle& oracle, NodeId u, NodeId v,
                     std::span<const NodeId> mediators) {
  if (mediators.empty()) throw std::invalid_argument("vote_pair: empty mediator set");
  if (u == v) throw std::invalid_argument("vote_pair: u != v required");
  VoteTally tally{u, v, 0, mediators.size(), 1};
  for (NodeId s : mediators) {
    if (s == u || s == v)
      throw std::invalid_argument("vote_pair: u, v must not be mediators");
    if (oracle.query(u, s) == oracle.query(v, s)) ++tally.agreeing;
  }
  // agreeing >= |S|/2 means the +1 votes win (ties are +1).
  tally.bar_tau = 2 * tally.agreeing >= tally.mediators ? Sign{1} : Sign{-1};
  return tally;
}

Sign vote_pair(NoisyOracle& oracle, NodeId u, NodeId v, std::span<const NodeId> mediators) {
  return vote_tally(oracle, u, v, mediators).bar_tau;
}

PairLabels::PairLabels(std::size_t n) : n_(n), tri_(n * (n - 1) / 2, Sign{1}) {}

std::size_t PairLabels::index(std::size_t i, std::size_t j) const {
  if (i == j || i >= n_ || j >= n_) throw std::out_of_range("PairLabels: bad pair");
  if (i > j) std::swap(i, j);
  return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

Sign PairLabels::at(std::size_t i, std::size_t j) const { return tri_[index(i, j)]; }

void PairLabels::set(std::size_t i, std::size_t j, Sign s) { tri_[index(i, j)] = s; }

std::vector<std::size_t> largest_positive_component(const PairLabels& labels) {
  const std::size_t n = labels.size();
  std::vector<int> comp(n, -1);
  std::vector<std::size_t> best;
  std::vector<std::size_t> stack, current;
  int comp_id = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] != -1) continue;
    current.clear();
    stack.assign(1, start);
    comp[start] = comp_id;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      current.push_back(u);
      for (std::size_t w = 0; w < n; ++w) {
        if (w == u || comp[w] != -1) continue;
        if (labels.at(u, w) == 1) {
          comp[w] = comp_id;
          stack.push_back(w);
        }
      }
    }
    // Components are discovered in ascending min-index order, so a
    // strict > keeps the smallest-min-index winner on ties.
    if (current.size() > best.size()) {
      std::sort(current.begin(), current.end());
      best = current;
    }
    ++comp_id;
  }
  return best;
}

PythiaReport recover_pythia(NoisyOracle& oracle, std::size_t n, const PythiaConfig& config) {
  config.validate(n);
  if (n > oracle.universe_size())
    throw std::invalid_argument("recover_pythia: n exceeds oracle universe");
  const std::uint64_t queries_before = oracle.query_count();

  // A = first size_a node ids, B the next size_b (optionally shuffled;
  // ids carry no information under the model).
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  if (config.shuffle) {
    Rng rng(derive_seed(config.shuffle_seed, 0x616273ULL));
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.next_below(i)]);
  }
  const std::span<const NodeId> set_a(order.data(), config.size_a);
  const std::span<const NodeId> set_b(order.data() + config.size_a, config.size_b);

  // Stage 1: all |A| x |B| cross queries, kept in a dense block so the
  // per-pair votes are cheap dot products over the cached answers.
  const std::size_t na = set_a.size(), nb = set_b.size();
  std::vector<Sign> block(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) block[i * nb + j] = oracle.query(set_a[i], set_b[j]);

  // Stage 2: majority vote per pair in A, mediated by B.
  PairLabels labels(na);
  for (std::size_t i = 0; i < na; ++i) {
    const Sign* row_i = &block[i * nb];
    for (std::size_t j = i + 1; j < na; ++j) {
      const Sign* row_j = &block[j * nb];
      std::int64_t sum = 0;
      for (std::size_t t = 0; t < nb; ++t)
        sum += static_cast<std::int32_t>(row_i[t]) * static_cast<std::int32_t>(row_j[t]);
      labels.set(i, j, majority_sign(sum));
    }
  }

  // Stage 3: seed component on the positive labels.
  const std::vector<std::size_t> seed_idx = largest_positive_component(labels);
  std::vector<NodeId> seed;
  seed.reserve(seed_idx.size());
  for (std::size_t i : seed_idx) seed.push_back(set_a[i]);

  std::vector<std::uint8_t> in_seed(n, 0);
  for (NodeId c : seed) in_seed[c] = 1;

  // Stage 4: classify everyone else by direct majority against the
  // fixed seed set; strict majority, ties stay out. Queries against
  // B-side nodes are already cached from stage 1.
  Clustering clustering;
  clustering.assignment.assign(n, 1);
  for (NodeId c : seed) clustering.assignment[c] = 0;
  for (NodeId u = 0; u < n; ++u) {
    if (in_seed[u]) continue;
    std::size_t positive = 0;
    for (NodeId c : seed)
      if (oracle.query(u, c) == 1) ++positive;
    if (2 * positive > seed.size()) clustering.assignment[u] = 0;
  }

  PythiaReport report;
  report.clustering = std::move(clustering);
  report.queries = oracle.query_count() - queries_before;
  report.size_c = seed.size();
  report.flagged = config.flagged;
  return report;
}

}  // namespace nclust
