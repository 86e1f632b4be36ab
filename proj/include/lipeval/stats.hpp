#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lipeval/corpus.hpp"

namespace lipeval {

/// Probability mass over a schema's labels, in canonical label order.
class LabelDistribution {
 public:
  /// Requires one entry per label, each in [0, 1], summing to 1 within 1e-9.
  LabelDistribution(PropertySchema schema, std::vector<double> probs);

  const PropertySchema& schema() const noexcept { return schema_; }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t i) const { return probs_.at(i); }
  double prob(std::string_view label) const;

  friend bool operator==(const LabelDistribution&, const LabelDistribution&) = default;

 private:
  PropertySchema schema_;
  std::vector<double> probs_;
};

class LabelCounts {
 public:
  LabelCounts(PropertySchema schema, std::vector<std::uint64_t> counts);

  const PropertySchema& schema() const noexcept { return schema_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t operator[](std::size_t i) const { return counts_.at(i); }
  std::uint64_t total() const noexcept { return total_; }
  LabelDistribution distribution() const;

  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;

 private:
  PropertySchema schema_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 1;
  double p_value = 1.0;
};

LabelCounts counts_from_labels(std::span<const std::string> labels, const PropertySchema& schema);
LabelDistribution distribution_from_labels(std::span<const std::string> labels,
                                           const PropertySchema& schema);

/// KL(p || q) in nats with additive smoothing: both distributions get
/// `epsilon` added to every cell and are renormalized before the sum.
/// `p` is the reference (original/gold) distribution.
double kl_divergence(const LabelDistribution& p, const LabelDistribution& q, double epsilon = 1e-9);

/// Two-sample chi-square test of homogeneity on a 2 x k table. Labels with
/// zero pooled count are dropped; dof = remaining labels - 1. No Yates
/// correction.
ChiSquareResult chi_square_homogeneity(const LabelCounts& a, const LabelCounts& b);

/// chi_square_homogeneity, except that a pooled table with one nonempty
/// label gives statistic 0, dof 0, p 1: both samples sit on that label.
ChiSquareResult homogeneity_test(const LabelCounts& a, const LabelCounts& b);

/// Upper tail of the chi-square distribution, Q(dof/2, statistic/2).
double chi_square_p_value(double statistic, int dof);

/// Regularized incomplete gamma functions: series for x < a + 1,
/// Lentz continued fraction otherwise.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

}  // namespace lipeval
