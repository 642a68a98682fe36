#include "nclust/types.hpp"

#include <algorithm>
#include <stdexcept>

#include "nclust/random.hpp"

namespace nclust {

GroundTruth::GroundTruth(std::vector<Sign> sigma) : sigma_(std::move(sigma)) {
  for (Sign s : sigma_) {
    if (s != -1 && s != 1) throw std::invalid_argument("sigma values must be -1 or +1");
  }
}

GroundTruth GroundTruth::balanced(std::size_t n) {
  std::vector<Sign> sigma(n, Sign{1});
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) sigma[i] = -1;
  return GroundTruth(std::move(sigma));
}

GroundTruth GroundTruth::random_balanced(std::size_t n, std::uint64_t seed) {
  std::vector<Sign> sigma(n, Sign{1});
  for (std::size_t i = 0; i < n / 2; ++i) sigma[i] = -1;
  Rng rng(derive_seed(seed, 0x7275746873ULL));
  for (std::size_t i = n; i > 1; --i) {  // Fisher-Yates
    const std::size_t j = rng.next_below(i);
    std::swap(sigma[i - 1], sigma[j]);
  }
  return GroundTruth(std::move(sigma));
}

GroundTruth GroundTruth::random(std::size_t n, std::uint64_t seed) {
  std::vector<Sign> sigma(n);
  Rng rng(derive_seed(seed, 0x636f696eULL));
  for (std::size_t i = 0; i < n; ++i) sigma[i] = rng.bernoulli(0.5) ? Sign{1} : Sign{-1};
  return GroundTruth(std::move(sigma));
}

GroundTruth GroundTruth::uniform(std::size_t n, Sign sign) {
  if (sign != -1 && sign != 1) throw std::invalid_argument("sign must be -1 or +1");
  return GroundTruth(std::vector<Sign>(n, sign));
}

std::vector<NodeId> GroundTruth::red_set() const {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < sigma_.size(); ++v)
    if (sigma_[v] == -1) out.push_back(static_cast<NodeId>(v));
  return out;
}

std::vector<NodeId> GroundTruth::blue_set() const {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < sigma_.size(); ++v)
    if (sigma_[v] == 1) out.push_back(static_cast<NodeId>(v));
  return out;
}

Clustering GroundTruth::to_clustering() const {
  Clustering c;
  c.assignment.resize(sigma_.size());
  for (std::size_t v = 0; v < sigma_.size(); ++v) c.assignment[v] = sigma_[v] == 1 ? 1 : 0;
  return c;
}

double clustering_agreement(const Clustering& a, const Clustering& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("clustering_agreement: node set size mismatch");
  if (a.size() == 0) return 1.0;
  std::size_t match = 0;
  for (std::size_t v = 0; v < a.size(); ++v)
    if (a.assignment[v] == b.assignment[v]) ++match;
  const std::size_t best = std::max(match, a.size() - match);
  return static_cast<double>(best) / static_cast<double>(a.size());
}

double clustering_agreement(const Clustering& found, const GroundTruth& truth) {
  return clustering_agreement(found, truth.to_clustering());
}

}  // namespace nclust
