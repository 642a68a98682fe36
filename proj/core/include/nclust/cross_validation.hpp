#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nclust/features.hpp"
#include "nclust/logistic.hpp"
#include "nclust/signed_graph.hpp"

namespace nclust {

enum class EmbFilter {
  min_threshold,  // keep edges with embeddedness >= value
  exact,          // keep edges with embeddedness == value
};

struct CvConfig {
  FeatureMask mask;
  EmbFilter emb_mode = EmbFilter::min_threshold;
  std::size_t emb_value = 0;
  std::uint64_t seed = 0;
  TrainHyper hyper;
  std::size_t jobs = 1;
};

struct CvReport {
  std::vector<double> fold_accuracies;  // 10 values
  double mean_accuracy = 0.0;
  std::vector<TrainedModel> fold_models;
  std::vector<std::vector<std::uint32_t>> folds;  // edge indices per fold
  std::size_t qualifying_edges = 0;  // after the embeddedness filter
  std::size_t sample_size = 0;       // balanced sample size
  EmbFilter emb_mode = EmbFilter::min_threshold;
  std::size_t emb_value = 0;
};

// Feature rows for the given edges, target edge left out per row.
// Parallel over edges; deterministic.
std::vector<LabeledRow> compute_feature_rows(const SignedGraph& graph,
                                             std::span<const std::uint32_t> edge_indices,
                                             std::size_t jobs);

// 10-fold cross validation on the balanced, embeddedness-filtered edge
// sample: features from the full graph (leave-one-out per edge), folds
// stratified by sign, one model per fold trained on the other nine.
// Throws std::invalid_argument when fewer than 20 edges qualify.
CvReport cross_validate(const SignedGraph& graph, const CvConfig& config);

}  // namespace nclust
