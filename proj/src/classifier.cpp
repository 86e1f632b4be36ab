#include "lipeval/classifier.hpp"

#include <cmath>

#include "lipeval/error.hpp"
#include "lipeval/numeric_text.hpp"

namespace lipeval {

TfidfClassifier::TfidfClassifier(std::shared_ptr<const ClassifierModel> model) : model_(std::move(model)) {
  if (!model_ || model_->feature_kind() != FeatureKind::Sparse || !model_->vocabulary()) {
    throw Error(Errc::InvalidArgument, "TF-IDF classifier needs a sparse model with a vocabulary");
  }
}

std::vector<Prediction> TfidfClassifier::predict(std::span<const Document> docs) const {
  std::vector<std::string> texts;
  std::vector<std::string> ids;
  texts.reserve(docs.size());
  ids.reserve(docs.size());
  for (const auto& d : docs) {
    texts.push_back(d.text);
    ids.push_back(d.id);
  }
  const auto x = featurize(texts, *model_->vocabulary());
  return lipeval::predict(*model_, x, ids);
}

std::string TfidfClassifier::describe() const {
  return "tf-idf char " + std::to_string(model_->vocabulary()->n_min()) + "-" +
         std::to_string(model_->vocabulary()->n_max()) + "-grams, logistic regression";
}

EmbeddingClassifier::EmbeddingClassifier(std::shared_ptr<const ClassifierModel> model,
                                         std::shared_ptr<const EmbeddingTable> table)
    : model_(std::move(model)), table_(std::move(table)) {
  if (!model_ || !table_ || model_->feature_kind() != FeatureKind::Dense) {
    throw Error(Errc::InvalidArgument, "embedding classifier needs a dense model and a table");
  }
  if (table_->dim() != model_->dim()) {
    throw Error(Errc::DimMismatch, "embedding dim " + std::to_string(table_->dim()) + " vs model dim " +
                                       std::to_string(model_->dim()));
  }
}

std::vector<Prediction> EmbeddingClassifier::predict(std::span<const Document> docs) const {
  std::vector<std::string> ids;
  ids.reserve(docs.size());
  for (const auto& d : docs) ids.push_back(d.id);
  return lipeval::predict(*model_, dense_matrix(ids, *table_), ids);
}

std::string EmbeddingClassifier::describe() const {
  return "sentence embeddings (dim " + std::to_string(table_->dim()) + "), logistic regression";
}

PrecomputedClassifier PrecomputedClassifier::read(std::istream& in, const PropertySchema& schema) {
  PrecomputedClassifier out(schema);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = "line " + std::to_string(lineno);
    const auto f = split(line, '\t');
    if (f.size() < 2) throw Error(Errc::MalformedRow, where + ": need id and label");
    const std::string id(f[0]);
    const std::string label(f[1]);
    if (!schema.contains(label)) {
      throw Error(Errc::UnknownLabel, where + ": label '" + label + "' not in property '" + schema.name() + "'");
    }
    Row row{label, {}};
    if (f.size() > 2) {
      if (f.size() != 2 + schema.size()) {
        throw Error(Errc::MalformedRow, where + ": expected " + std::to_string(schema.size()) + " probabilities");
      }
      double sum = 0.0;
      for (std::size_t i = 2; i < f.size(); ++i) {
        row.probs.push_back(parse_double(f[i], where));
        sum += row.probs.back();
      }
      if (std::abs(sum - 1.0) > 1e-6) throw Error(Errc::MalformedRow, where + ": probabilities do not sum to 1");
      if (std::abs(sum - 1.0) > 1e-9) {
        for (double& p : row.probs) p /= sum;
      }
    } else {
      row.probs.assign(schema.size(), 0.0);
      row.probs[*schema.index_of(label)] = 1.0;
    }
    if (!out.rows_.emplace(id, std::move(row)).second) throw Error(Errc::DuplicateId, where + ": id '" + id + "'");
  }
  return out;
}

std::vector<Prediction> PrecomputedClassifier::predict(std::span<const Document> docs) const {
  std::vector<Prediction> out;
  out.reserve(docs.size());
  for (const auto& d : docs) {
    const auto it = rows_.find(d.id);
    if (it == rows_.end()) throw Error(Errc::MissingId, "no precomputed prediction for id '" + d.id + "'");
    out.push_back({d.id, it->second.label, LabelDistribution(schema_, it->second.probs)});
  }
  return out;
}

std::unique_ptr<PrecomputedClassifier> precomputed_classifier(const std::filesystem::path& path,
                                                              const PropertySchema& schema) {
  auto in = open_input(path);
  try {
    return std::make_unique<PrecomputedClassifier>(PrecomputedClassifier::read(in, schema));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_predictions(std::ostream& out, std::span<const Prediction> predictions) {
  for (const auto& p : predictions) {
    out << p.id << '\t' << p.label;
    for (const double v : p.probabilities.probs()) out << '\t' << format_double(v);
    out << '\n';
  }
}

}  // namespace lipeval
