#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lipeval/table_reader.hpp"

namespace lipeval {

/// A property and its ordered label set. The label order is the canonical
/// axis of every distribution and weight matrix built over the property.
class PropertySchema {
 public:
  PropertySchema(std::string name, std::vector<std::string> labels);

  /// Parses "a,b,c".
  static PropertySchema from_csv(std::string name, std::string_view labels);

  const std::string& name() const noexcept { return name_; }
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::optional<std::size_t> index_of(std::string_view label) const;
  bool contains(std::string_view label) const { return index_of(label).has_value(); }

  /// Same labels in the same order; the name is not compared.
  bool same_labels(const PropertySchema& other) const noexcept { return labels_ == other.labels_; }

  friend bool operator==(const PropertySchema&, const PropertySchema&) = default;

 private:
  std::string name_;
  std::vector<std::string> labels_;
};

struct LabeledInstance {
  std::string id;
  std::string text;
  std::string label;

  friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

enum class Split { Train, Test };

class Corpus {
 public:
  /// Validates: labels in schema, ids unique, texts non-empty after trimming.
  Corpus(PropertySchema schema, Split split, std::vector<LabeledInstance> instances);

  const PropertySchema& schema() const noexcept { return schema_; }
  Split split() const noexcept { return split_; }
  std::span<const LabeledInstance> instances() const noexcept { return instances_; }
  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }
  const LabeledInstance& operator[](std::size_t i) const { return instances_.at(i); }
  std::optional<std::size_t> find(std::string_view id) const;

  std::vector<std::string> ids() const;
  std::vector<std::string> texts() const;
  std::vector<std::string> labels() const;

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.schema_ == b.schema_ && a.split_ == b.split_ && a.instances_ == b.instances_;
  }

 private:
  PropertySchema schema_;
  Split split_;
  std::vector<LabeledInstance> instances_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

struct TransformedPair {
  std::string id;
  std::string transformed_text;

  friend bool operator==(const TransformedPair&, const TransformedPair&) = default;
};

enum class TransformationKind { Translation, Paraphrase, Summarization, StyleTransfer, Identity, Custom };

TransformationKind parse_kind(std::string_view name);
std::string_view to_string(TransformationKind kind);

struct ConstraintViolation {
  std::string id;
  std::string reason;

  friend bool operator==(const ConstraintViolation&, const ConstraintViolation&) = default;
};

Corpus read_corpus(std::istream& in, FileFormat format, const PropertySchema& schema,
                   Split split = Split::Test);
Corpus load_corpus(const std::filesystem::path& path, FileFormat format,
                   const PropertySchema& schema, Split split = Split::Test);

/// Returns pairs in test-corpus order. Every corpus id must appear exactly once.
std::vector<TransformedPair> read_transformed(std::istream& in, FileFormat format,
                                              const Corpus& test_corpus);
std::vector<TransformedPair> load_transformed(const std::filesystem::path& path, FileFormat format,
                                              const Corpus& test_corpus);

/// Paraphrase requires canonical(t(a)) != canonical(a); summarization requires
/// strictly fewer scalar values. Other kinds impose nothing.
std::vector<ConstraintViolation> check_transformation_constraints(
    TransformationKind kind, const Corpus& corpus, std::span<const TransformedPair> pairs);

/// `id<TAB>reason` per line.
void write_violations(std::ostream& out, std::span<const ConstraintViolation> violations);

struct MappedCorpus {
  Corpus corpus;
  std::size_t dropped = 0;
};

/// Relabels through `mapping`; instances whose label has no entry are dropped.
MappedCorpus map_labels(const Corpus& corpus, const std::map<std::string, std::string>& mapping,
                        const PropertySchema& new_schema);

}  // namespace lipeval
