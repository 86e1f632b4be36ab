#pragma once

// Data-parallel kernels behind featurization, prediction and training.
// `omp` is what the library runs; `serial` is the straightforward reference
// the tests and benchmarks compare it against. Both produce identical
// results up to floating-point summation order, and the `omp` variants are
// bit-identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lipeval/features.hpp"

namespace lipeval::kernels {

/// Every n-gram occurrence (n_min..n_max code points) of preprocessed text.
std::vector<std::string_view> ngrams(std::string_view normalized, int n_min, int n_max);

struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
};

/// One TF-IDF row: preprocessing, counting, weighting, L2 normalization.
SparseVector featurize_document(std::string_view raw_text, const Vocabulary& vocab);

/// Flat parameter view: weights are classes x dim, class-major.
struct ParameterView {
  std::span<const double> weights;
  std::span<const double> biases;
};

struct LossGradient {
  double loss = 0.0;
  /// classes*dim weight entries followed by classes bias entries.
  std::vector<double> gradient;
};

namespace serial {

FeatureMatrix featurize(std::span<const std::string> texts, const Vocabulary& vocab);
/// rows x classes logits, row-major.
std::vector<double> logits(ParameterView params, const FeatureMatrix& x);
LossGradient loss_and_gradient(ParameterView params, const FeatureMatrix& x,
                               std::span<const std::uint32_t> labels, double lambda);

}  // namespace serial

namespace omp {

FeatureMatrix featurize(std::span<const std::string> texts, const Vocabulary& vocab);
std::vector<double> logits(ParameterView params, const FeatureMatrix& x);
LossGradient loss_and_gradient(ParameterView params, const FeatureMatrix& x,
                               std::span<const std::uint32_t> labels, double lambda);

/// Mean softmax cross-entropy plus (lambda/2)|W|^2 and its gradient.
/// Holds a column-major copy of the features so that the weight gradient
/// is reduced per column, in row order, independent of thread count.
class GradientEvaluator {
 public:
  GradientEvaluator(const FeatureMatrix& x, std::span<const std::uint32_t> labels,
                    std::size_t classes, double lambda);

  std::size_t classes() const noexcept { return classes_; }
  std::size_t dim() const noexcept { return x_.cols(); }
  std::size_t parameter_count() const noexcept { return classes_ * (x_.cols() + 1); }

  double loss(ParameterView params) const;
  LossGradient loss_and_gradient(ParameterView params) const;

 private:
  // Per-row losses and scaled residuals (p - y) / N.
  void forward(ParameterView params, std::vector<double>& row_loss,
               std::vector<double>* residual) const;
  double penalty(ParameterView params) const;

  const FeatureMatrix& x_;
  std::span<const std::uint32_t> labels_;
  std::size_t classes_;
  double lambda_;
  std::vector<std::size_t> col_ptr_;
  std::vector<std::uint32_t> col_rows_;
  std::vector<double> col_values_;
};

}  // namespace omp

/// Stable softmax of one logit row, in place.
void softmax(std::span<double> z);

}  // namespace lipeval::kernels
