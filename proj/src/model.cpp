#include "lipeval/model.hpp"

#include <cmath>
#include <set>

#include "lipeval/error.hpp"

namespace lipeval {

void TrainConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(Errc::InvalidArgument, "lambda must be >= 0");
  if (max_iters < 1) throw Error(Errc::InvalidArgument, "max_iters must be >= 1");
  if (!(tolerance > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be > 0");
}

ClassifierModel::ClassifierModel(PropertySchema schema, FeatureKind kind, std::size_t dim,
                                 std::vector<double> weights, std::vector<double> biases,
                                 TrainConfig config, std::optional<Vocabulary> vocabulary,
                                 TrainingSummary summary)
    : schema_(std::move(schema)),
      kind_(kind),
      dim_(dim),
      weights_(std::move(weights)),
      biases_(std::move(biases)),
      config_(config),
      vocabulary_(std::move(vocabulary)),
      summary_(summary) {
  if (weights_.size() != schema_.size() * dim_ || biases_.size() != schema_.size()) {
    throw Error(Errc::DimensionMismatch, "parameter shapes do not match labels x dim");
  }
  if (vocabulary_ && vocabulary_->size() != dim_) {
    throw Error(Errc::DimensionMismatch, "vocabulary size differs from model dim");
  }
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

ClassifierModel train(const FeatureMatrix& features, std::span<const std::string> labels,
                      const PropertySchema& schema, const TrainConfig& config,
                      std::optional<Vocabulary> vocabulary) {
  config.validate();
  if (labels.size() != features.rows()) {
    throw Error(Errc::DimensionMismatch, std::to_string(labels.size()) + " labels for " +
                                             std::to_string(features.rows()) + " rows");
  }
  if (labels.size() < 2) throw Error(Errc::DegenerateLabels, "need at least 2 training rows");

  std::vector<std::uint32_t> y;
  y.reserve(labels.size());
  std::set<std::uint32_t> present;
  for (const auto& l : labels) {
    const auto idx = schema.index_of(l);
    if (!idx) throw Error(Errc::UnknownLabel, "training label '" + l + "'");
    y.push_back(static_cast<std::uint32_t>(*idx));
    present.insert(y.back());
  }
  if (present.size() < 2) throw Error(Errc::DegenerateLabels, "training data has a single class");

  const std::size_t k = schema.size();
  const std::size_t d = features.cols();
  const kernels::omp::GradientEvaluator objective(features, y, k, config.lambda);

  std::vector<double> theta(k * d + k, 0.0);
  std::vector<double> trial(theta.size());
  const auto view = [k, d](const std::vector<double>& p) {
    return kernels::ParameterView{std::span(p).first(k * d), std::span(p).subspan(k * d)};
  };

  auto current = objective.loss_and_gradient(view(theta));
  if (!std::isfinite(current.loss)) throw Error(Errc::NonFiniteLoss, "initial loss is not finite");

  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-20;
  constexpr double kMaxStep = 1e8;
  double step = 1.0;
  TrainingSummary summary;
  summary.training_rows = features.rows();
  double gnorm = norm2(current.gradient);

  for (int iter = 0; iter < config.max_iters; ++iter) {
    if (gnorm < config.tolerance) {
      summary.converged = true;
      break;
    }
    const double decrease = kArmijo * gnorm * gnorm;
    double t = std::min(step * 2.0, kMaxStep);
    bool accepted = false;
    double trial_loss = 0.0;
    while (t >= kMinStep) {
      for (std::size_t j = 0; j < theta.size(); ++j) trial[j] = theta[j] - t * current.gradient[j];
      trial_loss = objective.loss(view(trial));
      if (std::isfinite(trial_loss) && trial_loss <= current.loss - t * decrease) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no representable descent step left
    theta.swap(trial);
    step = t;
    current = objective.loss_and_gradient(view(theta));
    if (!std::isfinite(current.loss)) throw Error(Errc::NonFiniteLoss, "loss diverged");
    gnorm = norm2(current.gradient);
    summary.iterations = iter + 1;
  }
  if (!summary.converged && gnorm < config.tolerance) summary.converged = true;
  summary.final_loss = current.loss;
  summary.gradient_norm = gnorm;

  std::vector<double> weights(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(k * d));
  std::vector<double> biases(theta.begin() + static_cast<std::ptrdiff_t>(k * d), theta.end());
  return ClassifierModel(schema, features.kind(), d, std::move(weights), std::move(biases), config,
                         std::move(vocabulary), summary);
}

std::size_t argmax_label(std::span<const double> probs, const PropertySchema& schema) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < probs.size(); ++c) {
    if (probs[c] > probs[best] || (probs[c] == probs[best] && schema.label(c) < schema.label(best))) {
      best = c;
    }
  }
  return best;
}

std::vector<Prediction> predict(const ClassifierModel& model, const FeatureMatrix& features,
                                std::span<const std::string> ids) {
  if (features.cols() != model.dim() || features.kind() != model.feature_kind()) {
    throw Error(Errc::DimensionMismatch, "features are " + std::string(to_string(features.kind())) + " x" +
                                             std::to_string(features.cols()) + ", model expects " +
                                             std::string(to_string(model.feature_kind())) + " x" +
                                             std::to_string(model.dim()));
  }
  if (ids.size() != features.rows()) throw Error(Errc::DimensionMismatch, "ids/rows mismatch");

  auto z = kernels::omp::logits(model.parameters(), features);
  const std::size_t k = model.classes();
  std::vector<Prediction> out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto row = std::span(z).subspan(i * k, k);
    kernels::softmax(row);
    const std::size_t best = argmax_label(row, model.schema());
    out.push_back({ids[i], model.schema().label(best),
                   LabelDistribution(model.schema(), std::vector<double>(row.begin(), row.end()))});
  }
  return out;
}

kernels::LossGradient loss_and_gradient(std::span<const double> weights, std::span<const double> biases,
                                        const FeatureMatrix& features,
                                        std::span<const std::uint32_t> labels, double lambda) {
  return kernels::omp::loss_and_gradient({weights, biases}, features, labels, lambda);
}

}  // namespace lipeval
