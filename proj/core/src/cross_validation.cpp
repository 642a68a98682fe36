#include "nclust/cross_validation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "nclust/parallel.hpp"
#include "nclust/random.hpp"

namespace nclust {

std::vector<LabeledRow> compute_feature_rows(const SignedGraph& graph,
                                             std::span<const std::uint32_t> edge_indices,
                                             std::size_t jobs) {
  std::vector<LabeledRow> rows(edge_indices.size());
  parallel_for(edge_indices.size(), jobs, [&](std::size_t i) {
    const SignedEdge& e = graph.edges()[edge_indices[i]];
    rows[i].x = feature_vector(graph, e.src, e.dst).as_array();
    rows[i].label = e.sign;
  });
  return rows;
}

CvReport cross_validate(const SignedGraph& graph, const CvConfig& config) {
  if (config.mask.empty()) throw std::invalid_argument("cross_validate: empty feature mask");

  // Filter by embeddedness, then balance.
  std::vector<std::uint32_t> qualifying;
  for (std::uint32_t i = 0; i < graph.edges().size(); ++i) {
    const SignedEdge& e = graph.edges()[i];
    const std::size_t c = embeddedness(graph, e.src, e.dst);
    const bool keep = config.emb_mode == EmbFilter::min_threshold ? c >= config.emb_value
                                                                  : c == config.emb_value;
    if (keep) qualifying.push_back(i);
  }
  if (qualifying.size() < 20)
    throw std::invalid_argument("cross_validate: fewer than 20 qualifying edges");
  const BalancedSample sample = balance_edge_subset(graph, qualifying, config.seed);
  if (sample.edge_indices.size() < 20)
    throw std::invalid_argument("cross_validate: fewer than 20 qualifying edges after balancing");

  // Features once, from the full graph, before splitting.
  const std::vector<LabeledRow> rows =
      compute_feature_rows(graph, sample.edge_indices, config.jobs);

  // Stratified 10-fold split: shuffle each class, deal remainders from
  // opposite ends so fold sizes stay within +-1 of sample/10.
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < rows.size(); ++i)
    (rows[i].label == 1 ? pos : neg).push_back(i);
  Rng rng(derive_seed(config.seed, 0xf01d5ULL));
  auto shuffle = [&rng](std::vector<std::size_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.next_below(i)]);
  };
  shuffle(pos);
  shuffle(neg);

  constexpr std::size_t kFolds = 10;
  std::vector<std::vector<std::size_t>> fold_rows(kFolds);
  for (std::size_t i = 0; i < pos.size(); ++i) fold_rows[i % kFolds].push_back(pos[i]);
  for (std::size_t i = 0; i < neg.size(); ++i)
    fold_rows[kFolds - 1 - (i % kFolds)].push_back(neg[i]);

  CvReport report;
  report.emb_mode = config.emb_mode;
  report.emb_value = config.emb_value;
  report.qualifying_edges = qualifying.size();
  report.sample_size = sample.edge_indices.size();
  report.fold_accuracies.assign(kFolds, 0.0);
  report.fold_models.resize(kFolds);
  report.folds.resize(kFolds);
  for (std::size_t f = 0; f < kFolds; ++f)
    for (std::size_t row : fold_rows[f])
      report.folds[f].push_back(sample.edge_indices[row]);

  parallel_for(kFolds, config.jobs, [&](std::size_t f) {
    std::vector<LabeledRow> train;
    train.reserve(rows.size() - fold_rows[f].size());
    for (std::size_t g = 0; g < kFolds; ++g) {
      if (g == f) continue;
      for (std::size_t row : fold_rows[g]) train.push_back(rows[row]);
    }
    TrainedModel model = train_logistic(train, config.mask, config.hyper);
    std::size_t correct = 0;
    for (std::size_t row : fold_rows[f]) {
      const std::array<double, 27>& x = rows[row].x;
      if (model.predict(std::span<const double>(x.data(), x.size())) == rows[row].label)
        ++correct;
    }
    report.fold_accuracies[f] =
        fold_rows[f].empty()
            ? 0.0
            : static_cast<double>(correct) / static_cast<double>(fold_rows[f].size());
    report.fold_models[f] = std::move(model);
  });

  report.mean_accuracy =
      std::accumulate(report.fold_accuracies.begin(), report.fold_accuracies.end(), 0.0) /
      static_cast<double>(kFolds);
  return report;
}

}  // namespace nclust
