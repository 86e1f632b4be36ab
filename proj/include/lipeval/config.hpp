#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lipeval/harness.hpp"
#include "lipeval/model.hpp"
#include "lipeval/table_reader.hpp"

namespace lipeval {

enum class ClassifierChoice { Tfidf, Embedding, Precomputed };

/// Evaluation run described by a flat `key = value` file. Relative paths
/// resolve against the directory of the config file.
struct RunConfig {
  std::string property = "property";
  std::vector<std::string> labels;
  TransformationKind kind = TransformationKind::Custom;
  std::optional<FileFormat> format;  // by extension when unset

  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> train_target;
  std::filesystem::path test;
  std::filesystem::path transformed;

  ClassifierChoice classifier = ClassifierChoice::Tfidf;
  TrainConfig training;
  int n_min = 2;
  int n_max = 6;
  std::size_t min_df = 1;

  std::optional<std::filesystem::path> embeddings_train;
  std::optional<std::filesystem::path> embeddings_train_target;
  std::optional<std::filesystem::path> embeddings_test;
  std::optional<std::filesystem::path> embeddings_transformed;
  std::optional<std::filesystem::path> predictions_original;
  std::optional<std::filesystem::path> predictions_transformed;

  double threshold = 0.05;
  double epsilon = 1e-9;

  std::filesystem::path report;
  std::optional<std::filesystem::path> plot;
  std::optional<std::filesystem::path> model_source_out;
  std::optional<std::filesystem::path> model_target_out;
};

/// Keys accepted in a config file, in documentation order.
const std::vector<std::string>& config_keys();

/// Throws Error(InvalidConfig) naming the offending key.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

struct RunResult {
  EvaluationReport report;
  std::vector<std::filesystem::path> written;
};

/// Loads data, trains classifiers when needed, evaluates, writes the report
/// (and plot data). Nothing is written unless evaluation succeeds.
RunResult run(const RunConfig& config);
RunResult run_from_config(const std::filesystem::path& path);

}  // namespace lipeval
