#include <doctest.h>

#include <cmath>
#include <random>

#include "lipeval/stats.hpp"
#include "support.hpp"

using namespace lipeval;
using namespace lipeval::testing;

namespace {

const PropertySchema kMF("gender", {"M", "F"});

LabelDistribution dist(double m, double f) { return LabelDistribution(kMF, {m, f}); }

LabelCounts counts(const PropertySchema& s, std::vector<std::uint64_t> c) { return LabelCounts(s, std::move(c)); }

// Upper tail of the chi-square density by Simpson's rule on 1 - P(X <= x),
// substituting t = u^2 so the integrand 2u f(u^2) stays smooth at zero.
double chi2_tail_by_quadrature(double x, int dof) {
  if (x <= 0.0) return 1.0;
  const double k = dof;
  const double log_norm = -(k / 2.0) * std::log(2.0) - std::lgamma(k / 2.0);
  const auto integrand = [&](double u) {
    if (u == 0.0) return dof == 1 ? 2.0 * std::exp(log_norm) : 0.0;
    return 2.0 * std::exp((k - 1.0) * std::log(u) - u * u / 2.0 + log_norm);
  };
  const double b = std::sqrt(x);
  const int n = 200000;
  const double h = b / n;
  double s = integrand(0.0) + integrand(b);
  for (int i = 1; i < n; ++i) s += integrand(i * h) * (i % 2 ? 4.0 : 2.0);
  return 1.0 - s * h / 3.0;
}

}  // namespace

TEST_CASE("distributions from labels") {
  CHECK(distribution_from_labels(std::vector<std::string>{"M", "M", "F", "F"}, kMF).probs()[0] == 0.5);
  const auto single = distribution_from_labels(std::vector<std::string>{"M"}, kMF);
  CHECK(single[0] == 1.0);
  CHECK(single[1] == 0.0);
  std::vector<std::string> mixed(52, "M");
  mixed.insert(mixed.end(), 48, "F");
  CHECK(distribution_from_labels(mixed, kMF).prob("M") == doctest::Approx(0.52));
  CHECK(counts_from_labels(mixed, kMF).total() == 100);
  CHECK(code_of([] { distribution_from_labels(std::vector<std::string>{}, kMF); }) == Errc::EmptyInput);
  CHECK(code_of([] { distribution_from_labels(std::vector<std::string>{"X"}, kMF); }) == Errc::UnknownLabel);
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(LabelDistribution(kMF, {0.6, 0.6}), Error);
  CHECK_THROWS_AS(LabelDistribution(kMF, {1.2, -0.2}), Error);
  CHECK_THROWS_AS(LabelDistribution(kMF, {1.0}), Error);
  CHECK_NOTHROW(LabelDistribution(kMF, {0.3, 0.7 + 5e-10}));
  CHECK(code_of([] { LabelCounts(kMF, {0, 0}); }) == Errc::EmptyInput);
}

TEST_CASE("kl divergence values") {
  CHECK(kl_divergence(dist(0.3, 0.7), dist(0.3, 0.7)) == 0.0);
  CHECK(kl_divergence(dist(0.9, 0.1), dist(0.5, 0.5)) ==
        doctest::Approx(0.9 * std::log(1.8) + 0.1 * std::log(0.2)).epsilon(1e-6));
  CHECK(kl_divergence(dist(0.9, 0.1), dist(0.5, 0.5)) == doctest::Approx(0.368064).epsilon(1e-4));
  CHECK(kl_divergence(dist(0.52, 0.48), dist(0.64, 0.36)) == doctest::Approx(0.0301149).epsilon(1e-5));
  CHECK(kl_divergence(dist(0.5, 0.5), dist(0.61, 0.39)) == doctest::Approx(0.0248053).epsilon(1e-5));
  CHECK(kl_divergence(dist(0.5, 0.5), dist(0.6, 0.4)) == doctest::Approx(0.0204110).epsilon(1e-5));
}

TEST_CASE("kl divergence stays finite with empty cells") {
  const double k = kl_divergence(dist(0.5, 0.5), dist(1.0, 0.0));
  CHECK(std::isfinite(k));
  CHECK(k > 5.0);
  CHECK(kl_divergence(dist(1.0, 0.0), dist(1.0, 0.0)) == 0.0);
  CHECK(kl_divergence(dist(1.0, 0.0), dist(0.5, 0.5)) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("kl divergence is not symmetric") {
  const double a = kl_divergence(dist(0.9, 0.1), dist(0.5, 0.5));
  const double b = kl_divergence(dist(0.5, 0.5), dist(0.9, 0.1));
  CHECK(a != doctest::Approx(b));
}

TEST_CASE("kl divergence checks schemas") {
  const PropertySchema other("x", {"F", "M"});
  CHECK(code_of([&] { kl_divergence(dist(0.5, 0.5), LabelDistribution(other, {0.5, 0.5})); }) ==
        Errc::SchemaMismatch);
}

TEST_CASE("gibbs inequality over random distributions") {
  std::mt19937_64 rng(2024);
  std::gamma_distribution<double> g(0.7);
  std::uniform_int_distribution<int> pick_k(2, 8);
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = pick_k(rng);
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back("l" + std::to_string(i));
    const PropertySchema s("p", names);
    const auto draw = [&] {
      std::vector<double> v(k);
      double sum = 0.0;
      for (auto& x : v) sum += x = g(rng) + 1e-300;
      for (auto& x : v) x /= sum;
      return LabelDistribution(s, v);
    };
    const auto p = draw(), q = draw();
    const double d = kl_divergence(p, q);
    REQUIRE(d >= 0.0);
    REQUIRE(kl_divergence(p, p) <= 1e-6);
    double tv = 0.0;
    for (int i = 0; i < k; ++i) tv += std::abs(p[i] - q[i]) / 2.0;
    // Pinsker: distinct distributions have strictly positive divergence.
    REQUIRE(d >= 2.0 * tv * tv - 1e-6);
  }
}

TEST_CASE("chi-square examples") {
  const auto same = chi_square_homogeneity(counts(kMF, {40, 60}), counts(kMF, {40, 60}));
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);

  const auto r = chi_square_homogeneity(counts(kMF, {50, 50}), counts(kMF, {70, 30}));
  CHECK(r.statistic == doctest::Approx(25.0 / 3.0).epsilon(1e-12));
  CHECK(r.dof == 1);
  CHECK(r.p_value == doctest::Approx(0.0038924171).epsilon(1e-7));
  CHECK(std::abs(r.p_value - 0.0039) <= 2e-4);
}

TEST_CASE("chi-square drops labels nobody used") {
  const PropertySchema three("p", {"a", "b", "c"});
  const auto r = chi_square_homogeneity(counts(three, {50, 0, 50}), counts(three, {70, 0, 30}));
  CHECK(r.dof == 1);
  CHECK(r.statistic == doctest::Approx(25.0 / 3.0));
  CHECK(code_of([&] { chi_square_homogeneity(counts(three, {5, 0, 0}), counts(three, {3, 0, 0})); }) ==
        Errc::DegenerateTable);
}

TEST_CASE("homogeneity test on a single-label table") {
  const auto r = homogeneity_test(counts(kMF, {5, 0}), counts(kMF, {9, 0}));
  CHECK(r.statistic == 0.0);
  CHECK(r.dof == 0);
  CHECK(r.p_value == 1.0);
  const auto full = homogeneity_test(counts(kMF, {50, 50}), counts(kMF, {70, 30}));
  CHECK(full.statistic == doctest::Approx(25.0 / 3.0));
}

TEST_CASE("chi-square invariances") {
  std::mt19937 rng(77);
  std::uniform_int_distribution<std::uint64_t> c(1, 500);
  const PropertySchema four("p", {"w", "x", "y", "z"});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> a(4), b(4);
    for (auto& v : a) v = c(rng);
    for (auto& v : b) v = c(rng);
    const auto base = chi_square_homogeneity(counts(four, a), counts(four, b));
    CHECK(base.statistic >= 0.0);
    CHECK(base.p_value >= 0.0);
    CHECK(base.p_value <= 1.0);
    CHECK(base.dof == 3);

    const auto swapped = chi_square_homogeneity(counts(four, b), counts(four, a));
    CHECK(swapped.statistic == doctest::Approx(base.statistic).epsilon(1e-12));
    CHECK(swapped.p_value == doctest::Approx(base.p_value).epsilon(1e-12));

    std::vector<std::uint64_t> pa{a[2], a[0], a[3], a[1]}, pb{b[2], b[0], b[3], b[1]};
    const auto permuted = chi_square_homogeneity(counts(four, pa), counts(four, pb));
    CHECK(permuted.statistic == doctest::Approx(base.statistic).epsilon(1e-12));

    std::vector<std::uint64_t> a2 = a, b2 = b;
    for (auto& v : a2) v *= 2;
    for (auto& v : b2) v *= 2;
    const auto doubled = chi_square_homogeneity(counts(four, a2), counts(four, b2));
    CHECK(doubled.statistic == doctest::Approx(2.0 * base.statistic).epsilon(1e-9));
  }
}

TEST_CASE("p-value reference points") {
  CHECK(chi_square_p_value(0.0, 1) == 1.0);
  CHECK(chi_square_p_value(0.0, 7) == 1.0);
  CHECK(std::abs(chi_square_p_value(3.841, 1) - 0.0500) <= 5e-4);
  CHECK(std::abs(chi_square_p_value(9.488, 4) - 0.0500) <= 5e-4);
  CHECK(chi_square_p_value(3.841, 1) == doctest::Approx(0.0500137).epsilon(1e-5));
  CHECK(chi_square_p_value(9.488, 4) == doctest::Approx(0.0499944).epsilon(1e-5));
  // dof 2 has the closed form exp(-x/2)
  for (double x : {0.1, 1.0, 5.0, 40.0}) CHECK(chi_square_p_value(x, 2) == doctest::Approx(std::exp(-x / 2)));
}

TEST_CASE("p-values agree with numerical integration of the density") {
  for (int dof : {1, 2, 3, 4, 7, 10, 30, 100}) {
    for (double x : {0.01, 0.5, 1.0, 3.841, 9.488, 20.0, 50.0, 150.0, 400.0, 1000.0}) {
      INFO("x=", x, " dof=", dof);
      CHECK(std::abs(chi_square_p_value(x, dof) - chi2_tail_by_quadrature(x, dof)) <= 1e-8);
    }
  }
}

TEST_CASE("p-value decreases with the statistic") {
  for (int dof : {1, 3, 12, 60}) {
    double previous = 1.0;
    for (double x = 0.0; x <= 300.0; x += 0.37) {
      const double p = chi_square_p_value(x, dof);
      CHECK(p <= previous);
      previous = p;
    }
  }
}

TEST_CASE("incomplete gamma halves sum to one") {
  for (double a : {0.5, 1.0, 2.5, 10.0, 50.0})
    for (double x : {0.1, 1.0, 3.0, 11.0, 49.0, 80.0})
      CHECK(regularized_gamma_p(a, x) + regularized_gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
}
