#include <doctest.h>

#include <omp.h>

#include <random>

#include "lipeval/features.hpp"
#include "lipeval/kernels.hpp"

using namespace lipeval;

namespace {

std::vector<std::string> random_docs(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> letter('a', 'l');
  std::vector<std::string> docs;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s;
    for (std::size_t k = 0; k < 10 + i % 31; ++k) s += (k % 5 == 4) ? ' ' : static_cast<char>(letter(rng));
    docs.push_back(s);
  }
  return docs;
}

struct Problem {
  std::vector<std::string> docs = random_docs(300, 11);
  Vocabulary vocab = build_vocabulary(docs);
  FeatureMatrix x = kernels::serial::featurize(docs, vocab);
  std::vector<std::uint32_t> labels;
  std::vector<double> w, b;

  explicit Problem(std::size_t classes) {
    std::mt19937 rng(5);
    std::normal_distribution<double> g(0.0, 0.3);
    for (std::size_t i = 0; i < x.rows(); ++i) labels.push_back(static_cast<std::uint32_t>(i % classes));
    w.resize(classes * x.cols());
    b.resize(classes);
    for (auto& v : w) v = g(rng);
    for (auto& v : b) v = g(rng);
  }
};

}  // namespace

TEST_CASE("softmax is stable for large logits") {
  std::vector<double> z{1000.0, 1000.0, -1000.0};
  kernels::softmax(z);
  CHECK(z[0] == doctest::Approx(0.5));
  CHECK(z[2] == 0.0);
}

TEST_CASE("parallel featurize matches the serial reference") {
  const auto docs = random_docs(200, 2);
  const auto v = build_vocabulary(docs);
  CHECK(kernels::omp::featurize(docs, v) == kernels::serial::featurize(docs, v));
}

TEST_CASE("parallel logits and gradient match the serial reference") {
  const Problem p(3);
  const kernels::ParameterView params{p.w, p.b};
  const auto zs = kernels::serial::logits(params, p.x);
  const auto zo = kernels::omp::logits(params, p.x);
  REQUIRE(zs.size() == zo.size());
  for (std::size_t i = 0; i < zs.size(); ++i) CHECK(zo[i] == doctest::Approx(zs[i]).epsilon(1e-12));

  const auto gs = kernels::serial::loss_and_gradient(params, p.x, p.labels, 0.1);
  const auto go = kernels::omp::loss_and_gradient(params, p.x, p.labels, 0.1);
  CHECK(go.loss == doctest::Approx(gs.loss).epsilon(1e-12));
  REQUIRE(gs.gradient.size() == go.gradient.size());
  for (std::size_t i = 0; i < gs.gradient.size(); ++i)
    CHECK(go.gradient[i] == doctest::Approx(gs.gradient[i]).epsilon(1e-10).scale(1e-12));
}

TEST_CASE("parallel kernels are bit identical across thread counts") {
  const Problem p(4);
  const kernels::ParameterView params{p.w, p.b};
  const int saved = omp_get_max_threads();

  omp_set_num_threads(1);
  const auto x1 = kernels::omp::featurize(p.docs, p.vocab);
  const auto g1 = kernels::omp::loss_and_gradient(params, p.x, p.labels, 0.5);
  omp_set_num_threads(4);
  const auto x4 = kernels::omp::featurize(p.docs, p.vocab);
  const auto g4 = kernels::omp::loss_and_gradient(params, p.x, p.labels, 0.5);
  omp_set_num_threads(saved);

  CHECK(x1 == x4);
  CHECK(g1.loss == g4.loss);
  CHECK(g1.gradient == g4.gradient);
}

TEST_CASE("dense inputs use the same kernels") {
  std::mt19937 rng(9);
  std::normal_distribution<double> g;
  std::vector<double> values(50 * 4);
  for (auto& v : values) v = g(rng);
  const auto x = FeatureMatrix::dense(50, 4, values);
  std::vector<std::uint32_t> labels(50);
  for (std::size_t i = 0; i < 50; ++i) labels[i] = i % 2;
  std::vector<double> w(8, 0.1), b(2, 0.0);
  const auto gs = kernels::serial::loss_and_gradient({w, b}, x, labels, 1.0);
  const auto go = kernels::omp::loss_and_gradient({w, b}, x, labels, 1.0);
  for (std::size_t i = 0; i < gs.gradient.size(); ++i)
    CHECK(go.gradient[i] == doctest::Approx(gs.gradient[i]).epsilon(1e-12));
}
