#include "lipeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lipeval/error.hpp"

namespace lipeval {

LabelDistribution::LabelDistribution(PropertySchema schema, std::vector<double> probs)
    : schema_(std::move(schema)), probs_(std::move(probs)) {
  if (probs_.size() != schema_.size()) {
    throw Error(Errc::SchemaMismatch, "distribution has " + std::to_string(probs_.size()) +
                                          " entries for " + std::to_string(schema_.size()) + " labels");
  }
  double sum = 0.0;
  for (const double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidArgument, "probability outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(Errc::InvalidArgument, "probabilities sum to " + std::to_string(sum));
  }
}

double LabelDistribution::prob(std::string_view label) const {
  const auto idx = schema_.index_of(label);
  if (!idx) throw Error(Errc::UnknownLabel, "label '" + std::string(label) + "'");
  return probs_[*idx];
}

LabelCounts::LabelCounts(PropertySchema schema, std::vector<std::uint64_t> counts)
    : schema_(std::move(schema)), counts_(std::move(counts)) {
  if (counts_.size() != schema_.size()) {
    throw Error(Errc::SchemaMismatch, "count vector length differs from label count");
  }
  for (const auto c : counts_) total_ += c;
  if (total_ == 0) throw Error(Errc::EmptyInput, "counts total zero");
}

LabelDistribution LabelCounts::distribution() const {
  std::vector<double> probs;
  probs.reserve(counts_.size());
  const double total = static_cast<double>(total_);
  for (const auto c : counts_) probs.push_back(static_cast<double>(c) / total);
  return LabelDistribution(schema_, std::move(probs));
}

LabelCounts counts_from_labels(std::span<const std::string> labels, const PropertySchema& schema) {
  if (labels.empty()) throw Error(Errc::EmptyInput, "no labels");
  std::vector<std::uint64_t> counts(schema.size(), 0);
  for (const auto& l : labels) {
    const auto idx = schema.index_of(l);
    if (!idx) throw Error(Errc::UnknownLabel, "label '" + l + "' not in property '" + schema.name() + "'");
    ++counts[*idx];
  }
  return LabelCounts(schema, std::move(counts));
}

LabelDistribution distribution_from_labels(std::span<const std::string> labels,
                                           const PropertySchema& schema) {
  return counts_from_labels(labels, schema).distribution();
}

double kl_divergence(const LabelDistribution& p, const LabelDistribution& q, double epsilon) {
  if (!p.schema().same_labels(q.schema())) throw Error(Errc::SchemaMismatch, "KL over different label sets");
  if (!(epsilon > 0.0)) throw Error(Errc::InvalidArgument, "smoothing epsilon must be positive");
  const std::size_t k = p.probs().size();
  const double denom = 1.0 + static_cast<double>(k) * epsilon;
  double kl = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double ps = (p[i] + epsilon) / denom;
    const double qs = (q[i] + epsilon) / denom;
    kl += ps * std::log(ps / qs);
  }
  // Rounding can leave -1e-17 for identical inputs.
  return std::max(kl, 0.0);
}

ChiSquareResult chi_square_homogeneity(const LabelCounts& a, const LabelCounts& b) {
  if (!a.schema().same_labels(b.schema())) throw Error(Errc::SchemaMismatch, "chi-square over different label sets");
  const double grand = static_cast<double>(a.total() + b.total());
  const double rows[2] = {static_cast<double>(a.total()), static_cast<double>(b.total())};
  const LabelCounts* tables[2] = {&a, &b};

  double stat = 0.0;
  int kept = 0;
  for (std::size_t l = 0; l < a.counts().size(); ++l) {
    const double col = static_cast<double>(a[l] + b[l]);
    if (col == 0.0) continue;
    ++kept;
    for (int r = 0; r < 2; ++r) {
      const double expected = rows[r] * col / grand;
      const double diff = static_cast<double>((*tables[r])[l]) - expected;
      stat += diff * diff / expected;
    }
  }
  if (kept < 2) {
    throw Error(Errc::DegenerateTable, "fewer than 2 labels with nonzero pooled count");
  }
  ChiSquareResult out;
  out.statistic = stat;
  out.dof = kept - 1;
  out.p_value = chi_square_p_value(stat, out.dof);
  return out;
}

namespace {

constexpr int kMaxIterations = 100000;
constexpr double kEps = 1e-16;

double gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw Error(Errc::InvalidArgument, "incomplete gamma requires a > 0 and x >= 0");
  }
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

ChiSquareResult homogeneity_test(const LabelCounts& a, const LabelCounts& b) {
  try {
    return chi_square_homogeneity(a, b);
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateTable) throw;
  }
  return {0.0, 0, 1.0};
}

double chi_square_p_value(double statistic, int dof) {
  if (dof < 1) throw Error(Errc::InvalidArgument, "dof must be positive");
  if (!(statistic >= 0.0)) throw Error(Errc::InvalidArgument, "statistic must be non-negative");
  return std::clamp(regularized_gamma_q(0.5 * dof, 0.5 * statistic), 0.0, 1.0);
}

}  // namespace lipeval
