#include <algorithm>
#include <cmath>

#include "lipeval/error.hpp"
#include "lipeval/kernels.hpp"
#include "lipeval/text.hpp"

namespace lipeval::kernels {

std::vector<std::string_view> ngrams(std::string_view normalized, int n_min, int n_max) {
  const auto offsets = text::code_point_offsets(normalized);
  const std::size_t chars = offsets.size() - 1;
  std::vector<std::string_view> out;
  for (int n = n_min; n <= n_max; ++n) {
    const auto len = static_cast<std::size_t>(n);
    if (len > chars) break;
    for (std::size_t i = 0; i + len <= chars; ++i) {
      out.push_back(normalized.substr(offsets[i], offsets[i + len] - offsets[i]));
    }
  }
  return out;
}

SparseVector featurize_document(std::string_view raw_text, const Vocabulary& vocab) {
  const std::string normalized = text::normalize_for_ngrams(raw_text);
  std::vector<std::uint32_t> hits;
  for (const auto g : ngrams(normalized, vocab.n_min(), vocab.n_max())) {
    if (const auto idx = vocab.index_of(g)) hits.push_back(*idx);
  }
  std::sort(hits.begin(), hits.end());

  SparseVector row;
  for (std::size_t k = 0; k < hits.size();) {
    std::size_t run = k;
    while (run < hits.size() && hits[run] == hits[k]) ++run;
    row.indices.push_back(hits[k]);
    row.values.push_back(static_cast<double>(run - k) * vocab.idf(hits[k]));
    k = run;
  }
  double sq = 0.0;
  for (const double v : row.values) sq += v * v;
  if (sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (double& v : row.values) v /= norm;
  }
  return row;
}

void softmax(std::span<double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

namespace {

FeatureMatrix assemble(std::vector<SparseVector>& rows, std::size_t cols) {
  std::vector<std::size_t> row_ptr{0};
  row_ptr.reserve(rows.size() + 1);
  std::size_t nnz = 0;
  for (const auto& r : rows) {
    nnz += r.indices.size();
    row_ptr.push_back(nnz);
  }
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  indices.reserve(nnz);
  values.reserve(nnz);
  for (auto& r : rows) {
    indices.insert(indices.end(), r.indices.begin(), r.indices.end());
    values.insert(values.end(), r.values.begin(), r.values.end());
  }
  return FeatureMatrix::sparse(cols, std::move(row_ptr), std::move(indices), std::move(values));
}

}  // namespace

namespace detail {
FeatureMatrix assemble_rows(std::vector<SparseVector>& rows, std::size_t cols) { return assemble(rows, cols); }

void check_shapes(ParameterView params, const FeatureMatrix& x, std::size_t label_count,
                  std::size_t expected_labels) {
  const std::size_t k = params.biases.size();
  if (k == 0 || params.weights.size() != k * x.cols()) {
    throw Error(Errc::DimensionMismatch, "weights have " + std::to_string(params.weights.size()) +
                                             " entries, expected " + std::to_string(k * x.cols()));
  }
  if (label_count != expected_labels) {
    throw Error(Errc::DimensionMismatch, "labels/rows mismatch");
  }
}
}  // namespace detail

namespace serial {

FeatureMatrix featurize(std::span<const std::string> texts, const Vocabulary& vocab) {
  std::vector<SparseVector> rows;
  rows.reserve(texts.size());
  for (const auto& t : texts) rows.push_back(featurize_document(t, vocab));
  return assemble(rows, vocab.size());
}

std::vector<double> logits(ParameterView params, const FeatureMatrix& x) {
  detail::check_shapes(params, x, x.rows(), x.rows());
  const std::size_t k = params.biases.size();
  const std::size_t d = x.cols();
  std::vector<double> z(x.rows() * k);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      z[i * k + c] = params.biases[c] + x.dot(i, params.weights.subspan(c * d, d));
    }
  }
  return z;
}

LossGradient loss_and_gradient(ParameterView params, const FeatureMatrix& x,
                               std::span<const std::uint32_t> labels, double lambda) {
  detail::check_shapes(params, x, labels.size(), x.rows());
  const std::size_t n = x.rows();
  const std::size_t k = params.biases.size();
  const std::size_t d = x.cols();

  LossGradient out;
  out.gradient.assign(k * d + k, 0.0);
  auto grad_w = std::span(out.gradient).first(k * d);
  auto grad_b = std::span(out.gradient).subspan(k * d);

  std::vector<double> z(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < k; ++c) z[c] = params.biases[c] + x.dot(i, params.weights.subspan(c * d, d));
    const double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (const double v : z) sum += std::exp(v - m);
    out.loss += m + std::log(sum) - z[labels[i]];

    softmax(z);
    for (std::size_t c = 0; c < k; ++c) {
      const double r = z[c] - (labels[i] == c ? 1.0 : 0.0);
      grad_b[c] += r;
      if (x.kind() == FeatureKind::Sparse) {
        const auto row = x.sparse_row(i);
        for (std::size_t t = 0; t < row.indices.size(); ++t) grad_w[c * d + row.indices[t]] += r * row.values[t];
      } else {
        const auto row = x.dense_row(i);
        for (std::size_t j = 0; j < d; ++j) grad_w[c * d + j] += r * row[j];
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  out.loss *= inv_n;
  for (double& g : out.gradient) g *= inv_n;

  double sq = 0.0;
  for (std::size_t j = 0; j < k * d; ++j) {
    sq += params.weights[j] * params.weights[j];
    grad_w[j] += lambda * params.weights[j];
  }
  out.loss += 0.5 * lambda * sq;
  return out;
}

}  // namespace serial
}  // namespace lipeval::kernels
