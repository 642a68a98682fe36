#include "nclust/logistic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace nclust {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// log(1 + e^t) without overflow.
double softplus(double t) {
  if (t > 0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

const std::vector<std::string>& FeatureMask::valid_names() {
  static const std::vector<std::string> names = {"All", "Leskovec", "Deg", "Tr",
                                                 "Triads", "P3", "P4"};
  return names;
}

FeatureMask FeatureMask::parse(const std::string& name) {
  FeatureMask mask;
  std::size_t pos = 0;
  while (pos <= name.size()) {
    std::size_t plus = name.find('+', pos);
    if (plus == std::string::npos) plus = name.size();
    const std::string part = lower(name.substr(pos, plus - pos));
    if (part == "all") {
      mask.deg = mask.tr = mask.triads = mask.p3 = mask.p4 = true;
    } else if (part == "leskovec" || part == "leskovec et al." || part == "leskovec-et-al") {
      mask.deg = mask.tr = mask.triads = true;
    } else if (part == "deg") {
      mask.deg = true;
    } else if (part == "tr") {
      mask.tr = true;
    } else if (part == "triads") {
      mask.triads = true;
    } else if (part == "p3") {
      mask.p3 = true;
    } else if (part == "p4") {
      mask.p4 = true;
    } else {
      std::string valid;
      for (const std::string& v : valid_names()) {
        if (!valid.empty()) valid += ", ";
        valid += v;
      }
      throw std::invalid_argument("unknown feature mask '" + name + "'; valid names: " +
                                  valid + " (joined with '+')");
    }
    pos = plus + 1;
  }
  if (mask.empty()) throw std::invalid_argument("feature mask must not be empty");
  return mask;
}

std::string FeatureMask::name() const {
  if (deg && tr && triads && p3 && p4) return "All";
  std::string out;
  auto add = [&out](const char* part) {
    if (!out.empty()) out += '+';
    out += part;
  };
  if (deg && tr && triads && !p3 && !p4) return "Leskovec";
  if (deg) add("Deg");
  if (tr) add("Tr");
  if (triads) add("Triads");
  if (p3) add("P3");
  if (p4) add("P4");
  return out;
}

std::vector<std::size_t> FeatureMask::columns() const {
  std::vector<std::size_t> cols;
  if (deg)
    for (std::size_t i = 0; i < 6; ++i) cols.push_back(i);
  if (tr) cols.push_back(6);
  if (triads)
    for (std::size_t i = 7; i < 23; ++i) cols.push_back(i);
  if (p3) {
    cols.push_back(23);
    cols.push_back(24);
  }
  if (p4) {
    cols.push_back(25);
    cols.push_back(26);
  }
  return cols;
}

namespace {

// Contiguous row-major design matrix; the hot loops run here.
double flat_loss(const double* x, const Sign* y, std::size_t n, std::size_t d,
                 std::span<const double> weights, double bias, double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x + i * d;
    double z = bias;
    for (std::size_t j = 0; j < d; ++j) z += weights[j] * row[j];
    loss += softplus(-static_cast<double>(y[i]) * z);
  }
  loss /= static_cast<double>(n);
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return loss + 0.5 * lambda * reg;
}

// One pass computing the objective and its gradient together; softplus
// and sigmoid share the same exp(-|t|).
double flat_loss_and_gradient(const double* x, const Sign* y, std::size_t n, std::size_t d,
                              std::span<const double> weights, double bias, double lambda,
                              std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x + i * d;
    double z = bias;
    for (std::size_t j = 0; j < d; ++j) z += weights[j] * row[j];
    const double t = static_cast<double>(y[i]) * z;
    const double a = std::exp(-std::abs(t));
    double coef;  // d softplus(-t) / dz * y = -y * sigmoid(-t)
    if (t >= 0) {
      loss += std::log1p(a);
      coef = -static_cast<double>(y[i]) * a / (1.0 + a);
    } else {
      loss += -t + std::log1p(a);
      coef = -static_cast<double>(y[i]) / (1.0 + a);
    }
    grad[0] += coef;
    for (std::size_t j = 0; j < d; ++j) grad[j + 1] += coef * row[j];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  loss *= inv_n;
  grad[0] *= inv_n;
  double reg = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    grad[j + 1] = grad[j + 1] * inv_n + lambda * weights[j];
    reg += weights[j] * weights[j];
  }
  return loss + 0.5 * lambda * reg;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& x) {
  const std::size_t d = x.empty() ? 0 : x[0].size();
  std::vector<double> flat;
  flat.reserve(x.size() * d);
  for (const auto& row : x) {
    if (row.size() != d) throw std::invalid_argument("ragged feature matrix");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return flat;
}

}  // namespace

double logistic_loss(const std::vector<std::vector<double>>& x, std::span<const Sign> y,
                     std::span<const double> weights, double bias, double lambda) {
  const std::vector<double> flat = flatten(x);
  return flat_loss(flat.data(), y.data(), x.size(), weights.size(), weights, bias, lambda);
}

void logistic_gradient(const std::vector<std::vector<double>>& x, std::span<const Sign> y,
                       std::span<const double> weights, double bias, double lambda,
                       std::span<double> grad) {
  const std::vector<double> flat = flatten(x);
  flat_loss_and_gradient(flat.data(), y.data(), x.size(), weights.size(), weights, bias,
                         lambda, grad);
}

TrainedModel::TrainedModel(std::vector<std::size_t> columns, std::vector<double> mean,
                           std::vector<double> stddev, std::vector<double> weights,
                           double bias)
    : columns_(std::move(columns)),
      mean_(std::move(mean)),
      stddev_(std::move(stddev)),
      weights_(std::move(weights)),
      bias_(bias) {}

double TrainedModel::predict_prob(std::span<const double> raw27) const {
  double z = bias_;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (stddev_[j] == 0.0) continue;  // constant feature, frozen weight
    z += weights_[j] * (raw27[columns_[j]] - mean_[j]) / stddev_[j];
  }
  return sigmoid(z);
}

Sign TrainedModel::predict(std::span<const double> raw27) const {
  return predict_prob(raw27) >= 0.5 ? Sign{1} : Sign{-1};
}

std::vector<double> TrainedModel::raw_weights() const {
  std::vector<double> raw(weights_.size(), 0.0);
  for (std::size_t j = 0; j < weights_.size(); ++j)
    if (stddev_[j] != 0.0) raw[j] = weights_[j] / stddev_[j];
  return raw;
}

double TrainedModel::raw_bias() const {
  double b = bias_;
  for (std::size_t j = 0; j < weights_.size(); ++j)
    if (stddev_[j] != 0.0) b -= weights_[j] * mean_[j] / stddev_[j];
  return b;
}

TrainedModel train_logistic(const std::vector<LabeledRow>& rows, const FeatureMask& mask,
                            const TrainHyper& hyper) {
  if (rows.size() < 2) throw std::invalid_argument("train_logistic: need at least 2 rows");
  bool has_pos = false, has_neg = false;
  for (const LabeledRow& r : rows) {
    (r.label == 1 ? has_pos : has_neg) = true;
    for (double v : r.x)
      if (!std::isfinite(v)) throw std::invalid_argument("train_logistic: non-finite feature");
  }
  if (!has_pos || !has_neg)
    throw std::invalid_argument("train_logistic: both labels must be present");

  const std::vector<std::size_t> columns = mask.columns();
  const std::size_t d = columns.size();
  const std::size_t n = rows.size();

  // z-score standardization from the training rows; constant columns are
  // frozen (stddev recorded as 0, weight stays 0).
  std::vector<double> mean(d, 0.0), stddev(d, 0.0);
  for (const LabeledRow& r : rows)
    for (std::size_t j = 0; j < d; ++j) mean[j] += r.x[columns[j]];
  for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
  for (const LabeledRow& r : rows)
    for (std::size_t j = 0; j < d; ++j) {
      const double c = r.x[columns[j]] - mean[j];
      stddev[j] += c * c;
    }
  for (std::size_t j = 0; j < d; ++j) {
    stddev[j] = std::sqrt(stddev[j] / static_cast<double>(n));
    if (stddev[j] < 1e-12) stddev[j] = 0.0;
  }

  std::vector<double> x(n * d, 0.0);
  std::vector<Sign> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rows[i].label;
    for (std::size_t j = 0; j < d; ++j)
      if (stddev[j] != 0.0) x[i * d + j] = (rows[i].x[columns[j]] - mean[j]) / stddev[j];
  }

  const double lambda =
      hyper.l2_lambda >= 0.0 ? hyper.l2_lambda : 1.0 / static_cast<double>(n);

  // Gradient descent with backtracking (Armijo) from zero init.
  std::vector<double> w(d, 0.0);
  double bias = 0.0;
  std::vector<double> grad(d + 1, 0.0);
  std::vector<double> w_try(d, 0.0);
  double step = 1.0;
  for (std::size_t iter = 0; iter < hyper.max_iters; ++iter) {
    const double loss = flat_loss_and_gradient(x.data(), y.data(), n, d, w, bias, lambda, grad);
    double max_norm = 0.0, sq_norm = 0.0;
    for (double g : grad) {
      max_norm = std::max(max_norm, std::abs(g));
      sq_norm += g * g;
    }
    if (max_norm < hyper.tolerance) break;

    step = std::min(step * 2.0, 1e6);  // let the step recover after shrinks
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      const double bias_try = bias - step * grad[0];
      for (std::size_t j = 0; j < d; ++j) w_try[j] = w[j] - step * grad[j + 1];
      const double loss_try = flat_loss(x.data(), y.data(), n, d, w_try, bias_try, lambda);
      if (loss_try <= loss - 1e-4 * step * sq_norm) {
        bias = bias_try;
        w.swap(w_try);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // step underflow: numerically converged
  }

  return TrainedModel(columns, std::move(mean), std::move(stddev), std::move(w), bias);
}

}  // namespace nclust
