#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nclust/types.hpp"

namespace nclust {

// Named subset of the 27 feature columns.
struct FeatureMask {
  bool deg = false;     // f1..f6, degree counts
  bool tr = false;      // f7, embeddedness
  bool triads = false;  // f8..f23
  bool p3 = false;      // f24, f25
  bool p4 = false;      // f26, f27

  // Accepts All, Leskovec, Deg, Tr, Triads, P3, P4 and '+' combinations
  // (case-insensitive); throws std::invalid_argument listing the valid
  // names otherwise.
  static FeatureMask parse(const std::string& name);
  static const std::vector<std::string>& valid_names();

  std::string name() const;
  std::vector<std::size_t> columns() const;  // indices into the 27-vector
  bool empty() const { return !(deg || tr || triads || p3 || p4); }
};

struct LabeledRow {
  std::array<double, 27> x{};
  Sign label = 1;
};

struct TrainHyper {
  double l2_lambda = -1.0;  // < 0 means 1/N (N = training rows)
  std::size_t max_iters = 300;
  double tolerance = 1e-7;  // gradient max-norm stop
};

// Mean logistic loss + 0.5 * lambda * |w|^2 over rows with selected,
// already-standardized columns. Bias is unregularized.
double logistic_loss(const std::vector<std::vector<double>>& x,
                     std::span<const Sign> y, std::span<const double> weights,
                     double bias, double lambda);
// Gradient of the same objective; grad[0] is the bias component,
// grad[1..d] the weights.
void logistic_gradient(const std::vector<std::vector<double>>& x,
                       std::span<const Sign> y, std::span<const double> weights,
                       double bias, double lambda, std::span<double> grad);

// L2-regularized logistic regression fitted by gradient descent with
// backtracking line search, zero initialization, z-score standardization
// from the training rows. Deterministic. Constant columns are frozen at
// weight zero. Throws std::invalid_argument on single-class input or
// non-finite features.
class TrainedModel {
 public:
  TrainedModel() = default;
  TrainedModel(std::vector<std::size_t> columns, std::vector<double> mean,
               std::vector<double> stddev, std::vector<double> weights, double bias);

  // P(label=+1 | x) for a raw (unstandardized) 27-feature row.
  double predict_prob(std::span<const double> raw27) const;
  Sign predict(std::span<const double> raw27) const;

  double bias() const { return bias_; }
  const std::vector<double>& weights() const { return weights_; }  // standardized space
  const std::vector<std::size_t>& columns() const { return columns_; }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return stddev_; }

  // Raw-space equivalents: w_raw = w/s, b_raw = b - sum(w*m/s).
  std::vector<double> raw_weights() const;
  double raw_bias() const;

 private:
  std::vector<std::size_t> columns_;
  std::vector<double> mean_, stddev_;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

TrainedModel train_logistic(const std::vector<LabeledRow>& rows, const FeatureMask& mask,
                            const TrainHyper& hyper = {});

}  // namespace nclust
