#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lipeval/model.hpp"

namespace lipeval {

struct Document {
  std::string id;
  std::string text;
};

/// Anything that maps documents to label predictions over one property.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual const PropertySchema& schema() const = 0;
  virtual std::vector<Prediction> predict(std::span<const Document> docs) const = 0;
  virtual std::string describe() const = 0;
};

/// The default classifier: char n-gram TF-IDF features into a trained model.
class TfidfClassifier final : public Classifier {
 public:
  explicit TfidfClassifier(std::shared_ptr<const ClassifierModel> model);

  const PropertySchema& schema() const override { return model_->schema(); }
  std::vector<Prediction> predict(std::span<const Document> docs) const override;
  std::string describe() const override;

 private:
  std::shared_ptr<const ClassifierModel> model_;
};

/// Dense model over precomputed sentence embeddings, looked up by id.
class EmbeddingClassifier final : public Classifier {
 public:
  EmbeddingClassifier(std::shared_ptr<const ClassifierModel> model,
                      std::shared_ptr<const EmbeddingTable> table);

  const PropertySchema& schema() const override { return model_->schema(); }
  std::vector<Prediction> predict(std::span<const Document> docs) const override;
  std::string describe() const override;

 private:
  std::shared_ptr<const ClassifierModel> model_;
  std::shared_ptr<const EmbeddingTable> table_;
};

/// Replays predictions produced elsewhere. File rows are
/// `id<TAB>label[<TAB>p1 ... pk]`, probabilities in schema label order.
class PrecomputedClassifier final : public Classifier {
 public:
  static PrecomputedClassifier read(std::istream& in, const PropertySchema& schema);

  const PropertySchema& schema() const override { return schema_; }
  std::vector<Prediction> predict(std::span<const Document> docs) const override;
  std::string describe() const override { return "precomputed"; }
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  explicit PrecomputedClassifier(PropertySchema schema) : schema_(std::move(schema)) {}

  struct Row {
    std::string label;
    std::vector<double> probs;
  };
  PropertySchema schema_;
  std::unordered_map<std::string, Row> rows_;
};

std::unique_ptr<PrecomputedClassifier> precomputed_classifier(const std::filesystem::path& path,
                                                              const PropertySchema& schema);

void write_predictions(std::ostream& out, std::span<const Prediction> predictions);

}  // namespace lipeval
