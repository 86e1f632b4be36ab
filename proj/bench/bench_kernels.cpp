// Serial reference vs OpenMP kernels on a synthetic planted-marker corpus.
#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "lipeval/features.hpp"
#include "lipeval/kernels.hpp"
#include "lipeval/synthetic.hpp"

using namespace lipeval;

namespace {

struct Workload {
  std::vector<std::string> texts;
  Vocabulary vocab;
  FeatureMatrix x;
  std::vector<std::uint32_t> labels;
  std::vector<double> weights;
  std::vector<double> biases;
};

const Workload& workload(std::size_t documents) {
  static std::map<std::size_t, Workload> cache;
  auto it = cache.find(documents);
  if (it != cache.end()) return it->second;
  const auto fx = synthetic::make_planted_fixture({.documents = documents * 2});
  auto texts = fx.train.texts();
  auto vocab = build_vocabulary(texts);
  auto x = kernels::serial::featurize(texts, vocab);
  std::vector<std::uint32_t> labels;
  for (const auto& l : fx.train.labels()) labels.push_back(l == "M" ? 0u : 1u);
  std::mt19937 rng(1);
  std::normal_distribution<double> g(0.0, 0.1);
  std::vector<double> w(2 * x.cols());
  for (auto& v : w) v = g(rng);
  std::vector<double> b{0.1, -0.1};
  return cache
      .emplace(documents, Workload{std::move(texts), std::move(vocab), std::move(x), std::move(labels), std::move(w),
                                   std::move(b)})
      .first->second;
}

template <auto Featurize>
void BM_featurize(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Featurize(w.texts, w.vocab));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Logits>
void BM_logits(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Logits({w.weights, w.biases}, w.x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto LossGradient>
void BM_loss_and_gradient(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(LossGradient({w.weights, w.biases}, w.x, w.labels, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_gradient_evaluator(benchmark::State& state) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  const kernels::omp::GradientEvaluator eval(w.x, w.labels, 2, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval.loss_and_gradient({w.weights, w.biases}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_featurize<kernels::serial::featurize>)->Name("featurize/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_featurize<kernels::omp::featurize>)->Name("featurize/omp")->Arg(500)->Arg(2000);
BENCHMARK(BM_logits<kernels::serial::logits>)->Name("logits/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_logits<kernels::omp::logits>)->Name("logits/omp")->Arg(500)->Arg(2000);
BENCHMARK(BM_loss_and_gradient<kernels::serial::loss_and_gradient>)->Name("loss_and_gradient/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_loss_and_gradient<kernels::omp::loss_and_gradient>)->Name("loss_and_gradient/omp")->Arg(500)->Arg(2000);
BENCHMARK(BM_gradient_evaluator)->Name("loss_and_gradient/omp_evaluator")->Arg(500)->Arg(2000);

BENCHMARK_MAIN();
