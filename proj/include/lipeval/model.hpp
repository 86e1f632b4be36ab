#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lipeval/corpus.hpp"
#include "lipeval/features.hpp"
#include "lipeval/kernels.hpp"
#include "lipeval/stats.hpp"

namespace lipeval {

struct TrainConfig {
  double lambda = 1.0;
  int max_iters = 1000;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;  // recorded only; full-batch descent from zero is deterministic

  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct TrainingSummary {
  std::size_t training_rows = 0;
  int iterations = 0;
  double final_loss = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;

  friend bool operator==(const TrainingSummary&, const TrainingSummary&) = default;
};

/// Multinomial logistic regression: one weight row and one bias per label.
/// Sparse models carry the vocabulary they were trained over.
class ClassifierModel {
 public:
  ClassifierModel(PropertySchema schema, FeatureKind kind, std::size_t dim, std::vector<double> weights,
                  std::vector<double> biases, TrainConfig config, std::optional<Vocabulary> vocabulary,
                  TrainingSummary summary = {});

  const PropertySchema& schema() const noexcept { return schema_; }
  FeatureKind feature_kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t classes() const noexcept { return schema_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> weights(std::size_t label) const {
    return std::span(weights_).subspan(label * dim_, dim_);
  }
  std::span<const double> biases() const noexcept { return biases_; }
  const TrainConfig& config() const noexcept { return config_; }
  const std::optional<Vocabulary>& vocabulary() const noexcept { return vocabulary_; }
  const TrainingSummary& summary() const noexcept { return summary_; }

  kernels::ParameterView parameters() const noexcept { return {weights_, biases_}; }

  friend bool operator==(const ClassifierModel&, const ClassifierModel&) = default;

 private:
  PropertySchema schema_;
  FeatureKind kind_;
  std::size_t dim_;
  std::vector<double> weights_;
  std::vector<double> biases_;
  TrainConfig config_;
  std::optional<Vocabulary> vocabulary_;
  TrainingSummary summary_;
};

struct Prediction {
  std::string id;
  std::string label;
  LabelDistribution probabilities;
};

/// Full-batch gradient descent from zero with Armijo backtracking (c = 1e-4,
/// halving). Stops when the gradient norm drops below tolerance or after
/// max_iters steps.
ClassifierModel train(const FeatureMatrix& features, std::span<const std::string> labels,
                      const PropertySchema& schema, const TrainConfig& config,
                      std::optional<Vocabulary> vocabulary = std::nullopt);

std::vector<Prediction> predict(const ClassifierModel& model, const FeatureMatrix& features,
                                std::span<const std::string> ids);

/// Argmax; exact ties go to the lexicographically smallest label.
std::size_t argmax_label(std::span<const double> probs, const PropertySchema& schema);

/// Objective and exact gradient at (weights, biases). Gradient layout is
/// classes*dim weights (class-major) followed by classes biases.
kernels::LossGradient loss_and_gradient(std::span<const double> weights, std::span<const double> biases,
                                        const FeatureMatrix& features,
                                        std::span<const std::uint32_t> labels, double lambda);

void write_model(std::ostream& out, const ClassifierModel& model);
ClassifierModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const ClassifierModel& model);
ClassifierModel load_model(const std::filesystem::path& path);

}  // namespace lipeval
