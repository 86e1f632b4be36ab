#include <omp.h>

#include <algorithm>
#include <cmath>

#include "lipeval/error.hpp"
#include "lipeval/kernels.hpp"

namespace lipeval::kernels {

namespace detail {
FeatureMatrix assemble_rows(std::vector<SparseVector>& rows, std::size_t cols);
void check_shapes(ParameterView params, const FeatureMatrix& x, std::size_t label_count,
                  std::size_t expected_labels);
}  // namespace detail

namespace omp {

FeatureMatrix featurize(std::span<const std::string> texts, const Vocabulary& vocab) {
  std::vector<SparseVector> rows(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < n; ++i) rows[i] = featurize_document(texts[i], vocab);
  return detail::assemble_rows(rows, vocab.size());
}

std::vector<double> logits(ParameterView params, const FeatureMatrix& x) {
  detail::check_shapes(params, x, x.rows(), x.rows());
  const std::size_t k = params.biases.size();
  const std::size_t d = x.cols();
  std::vector<double> z(x.rows() * k);
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      z[i * k + c] = params.biases[c] + x.dot(i, params.weights.subspan(c * d, d));
    }
  }
  return z;
}

GradientEvaluator::GradientEvaluator(const FeatureMatrix& x, std::span<const std::uint32_t> labels,
                                     std::size_t classes, double lambda)
    : x_(x), labels_(labels), classes_(classes), lambda_(lambda) {
  if (labels.size() != x.rows()) throw Error(Errc::DimensionMismatch, "labels/rows mismatch");
  if (x.rows() == 0) throw Error(Errc::EmptyInput, "no training rows");
  for (const auto y : labels) {
    if (y >= classes) throw Error(Errc::DimensionMismatch, "label index out of range");
  }

  // Column-major copy; within a column, rows ascend.
  const std::size_t d = x.cols();
  col_ptr_.assign(d + 1, 0);
  if (x.kind() == FeatureKind::Sparse) {
    for (const auto j : x.indices()) ++col_ptr_[j + 1];
  } else {
    for (std::size_t j = 0; j < d; ++j) col_ptr_[j + 1] = x.rows();
  }
  for (std::size_t j = 0; j < d; ++j) col_ptr_[j + 1] += col_ptr_[j];
  col_rows_.resize(col_ptr_[d]);
  col_values_.resize(col_ptr_[d]);
  std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (x.kind() == FeatureKind::Sparse) {
      const auto row = x.sparse_row(i);
      for (std::size_t t = 0; t < row.indices.size(); ++t) {
        const auto pos = fill[row.indices[t]]++;
        col_rows_[pos] = static_cast<std::uint32_t>(i);
        col_values_[pos] = row.values[t];
      }
    } else {
      const auto row = x.dense_row(i);
      for (std::size_t j = 0; j < d; ++j) {
        const auto pos = fill[j]++;
        col_rows_[pos] = static_cast<std::uint32_t>(i);
        col_values_[pos] = row[j];
      }
    }
  }
}

void GradientEvaluator::forward(ParameterView params, std::vector<double>& row_loss,
                                std::vector<double>* residual) const {
  detail::check_shapes(params, x_, labels_.size(), x_.rows());
  if (params.biases.size() != classes_) throw Error(Errc::DimensionMismatch, "bias count");
  const std::size_t k = classes_;
  const std::size_t d = x_.cols();
  const auto n = static_cast<std::ptrdiff_t>(x_.rows());
  const double inv_n = 1.0 / static_cast<double>(n);
  row_loss.assign(x_.rows(), 0.0);
  if (residual) residual->assign(x_.rows() * k, 0.0);

#pragma omp parallel
  {
    std::vector<double> z(k);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < k; ++c) z[c] = params.biases[c] + x_.dot(i, params.weights.subspan(c * d, d));
      const double m = *std::max_element(z.begin(), z.end());
      double sum = 0.0;
      for (const double v : z) sum += std::exp(v - m);
      row_loss[i] = m + std::log(sum) - z[labels_[i]];
      if (residual) {
        softmax(z);
        for (std::size_t c = 0; c < k; ++c) {
          (*residual)[i * k + c] = (z[c] - (labels_[i] == c ? 1.0 : 0.0)) * inv_n;
        }
      }
    }
  }
}

double GradientEvaluator::penalty(ParameterView params) const {
  double sq = 0.0;
  for (const double w : params.weights) sq += w * w;
  return 0.5 * lambda_ * sq;
}

double GradientEvaluator::loss(ParameterView params) const {
  std::vector<double> row_loss;
  forward(params, row_loss, nullptr);
  double total = 0.0;
  for (const double l : row_loss) total += l;
  return total / static_cast<double>(x_.rows()) + penalty(params);
}

LossGradient GradientEvaluator::loss_and_gradient(ParameterView params) const {
  std::vector<double> row_loss;
  std::vector<double> residual;
  forward(params, row_loss, &residual);

  const std::size_t k = classes_;
  const std::size_t d = x_.cols();
  LossGradient out;
  double total = 0.0;
  for (const double l : row_loss) total += l;
  out.loss = total / static_cast<double>(x_.rows()) + penalty(params);
  out.gradient.assign(k * d + k, 0.0);

  const auto cols = static_cast<std::ptrdiff_t>(d);
  double* grad = out.gradient.data();
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t j = 0; j < cols; ++j) {
    for (std::size_t c = 0; c < k; ++c) {
      double g = 0.0;
      for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
        g += residual[col_rows_[p] * k + c] * col_values_[p];
      }
      grad[c * d + j] = g + lambda_ * params.weights[c * d + j];
    }
  }
  for (std::size_t i = 0; i < x_.rows(); ++i) {
    for (std::size_t c = 0; c < k; ++c) grad[k * d + c] += residual[i * k + c];
  }
  return out;
}

LossGradient loss_and_gradient(ParameterView params, const FeatureMatrix& x,
                               std::span<const std::uint32_t> labels, double lambda) {
  const GradientEvaluator eval(x, labels, params.biases.size(), lambda);
  return eval.loss_and_gradient(params);
}

}  // namespace omp
}  // namespace lipeval::kernels
