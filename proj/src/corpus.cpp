#include "lipeval/corpus.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "lipeval/error.hpp"
#include "lipeval/text.hpp"

namespace lipeval {

PropertySchema::PropertySchema(std::string name, std::vector<std::string> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
  if (name_.empty()) throw Error(Errc::InvalidArgument, "property name must be non-empty");
  if (labels_.size() < 2) {
    throw Error(Errc::InvalidArgument, "property '" + name_ + "' needs at least 2 labels");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw Error(Errc::InvalidArgument, "empty label in property '" + name_ + "'");
    if (!seen.insert(l).second) {
      throw Error(Errc::InvalidArgument, "duplicate label '" + l + "' in property '" + name_ + "'");
    }
  }
}

PropertySchema PropertySchema::from_csv(std::string name, std::string_view labels) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= labels.size()) {
    const std::size_t comma = labels.find(',', start);
    const auto piece = labels.substr(start, comma == std::string_view::npos ? labels.npos : comma - start);
    out.push_back(text::trim(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return PropertySchema(std::move(name), std::move(out));
}

std::optional<std::size_t> PropertySchema::index_of(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

Corpus::Corpus(PropertySchema schema, Split split, std::vector<LabeledInstance> instances)
    : schema_(std::move(schema)), split_(split), instances_(std::move(instances)) {
  by_id_.reserve(instances_.size());
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    const auto& inst = instances_[i];
    if (text::trim(inst.text).empty()) throw Error(Errc::EmptyText, "instance '" + inst.id + "'");
    if (!schema_.contains(inst.label)) {
      throw Error(Errc::UnknownLabel, "instance '" + inst.id + "' has label '" + inst.label + "'");
    }
    if (!by_id_.emplace(inst.id, i).second) throw Error(Errc::DuplicateId, "id '" + inst.id + "'");
  }
}

std::optional<std::size_t> Corpus::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Corpus::ids() const {
  std::vector<std::string> out;
  out.reserve(size());
  for (const auto& i : instances_) out.push_back(i.id);
  return out;
}

std::vector<std::string> Corpus::texts() const {
  std::vector<std::string> out;
  out.reserve(size());
  for (const auto& i : instances_) out.push_back(i.text);
  return out;
}

std::vector<std::string> Corpus::labels() const {
  std::vector<std::string> out;
  out.reserve(size());
  for (const auto& i : instances_) out.push_back(i.label);
  return out;
}

TransformationKind parse_kind(std::string_view name) {
  if (name == "translation") return TransformationKind::Translation;
  if (name == "paraphrase") return TransformationKind::Paraphrase;
  if (name == "summarization") return TransformationKind::Summarization;
  if (name == "style-transfer") return TransformationKind::StyleTransfer;
  if (name == "identity") return TransformationKind::Identity;
  if (name == "custom") return TransformationKind::Custom;
  throw Error(Errc::InvalidArgument,
              "unknown transformation kind '" + std::string(name) +
                  "' (translation|paraphrase|summarization|style-transfer|identity|custom)");
}

std::string_view to_string(TransformationKind kind) {
  switch (kind) {
    case TransformationKind::Translation: return "translation";
    case TransformationKind::Paraphrase: return "paraphrase";
    case TransformationKind::Summarization: return "summarization";
    case TransformationKind::StyleTransfer: return "style-transfer";
    case TransformationKind::Identity: return "identity";
    case TransformationKind::Custom: return "custom";
  }
  return "custom";
}

namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

Corpus read_corpus(std::istream& in, FileFormat format, const PropertySchema& schema, Split split) {
  static constexpr std::array<std::string_view, 3> kColumns{"id", "text", "label"};
  const auto rows = io::read_table(in, format, kColumns);

  std::vector<LabeledInstance> instances;
  instances.reserve(rows.size());
  std::unordered_set<std::string> seen;
  for (const auto& row : rows) {
    const auto& id = row.values[0];
    const auto& body = row.values[1];
    const auto& label = row.values[2];
    if (id.empty()) throw Error(Errc::MalformedRow, at_line(row.line) + "empty id");
    if (text::trim(body).empty()) throw Error(Errc::EmptyText, at_line(row.line) + "id '" + id + "'");
    if (!schema.contains(label)) {
      throw Error(Errc::UnknownLabel, at_line(row.line) + "label '" + label + "' not in property '" +
                                          schema.name() + "'");
    }
    if (!seen.insert(id).second) throw Error(Errc::DuplicateId, at_line(row.line) + "id '" + id + "'");
    instances.push_back({id, body, label});
  }
  return Corpus(schema, split, std::move(instances));
}

Corpus load_corpus(const std::filesystem::path& path, FileFormat format,
                   const PropertySchema& schema, Split split) {
  auto in = open_input(path);
  try {
    return read_corpus(in, format, schema, split);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<TransformedPair> read_transformed(std::istream& in, FileFormat format,
                                              const Corpus& test_corpus) {
  static constexpr std::array<std::string_view, 2> kColumns{"id", "text"};
  const auto rows = io::read_table(in, format, kColumns);

  std::vector<std::optional<std::string>> slots(test_corpus.size());
  for (const auto& row : rows) {
    const auto& id = row.values[0];
    const auto idx = test_corpus.find(id);
    if (!idx) throw Error(Errc::UnknownId, at_line(row.line) + "id '" + id + "' not in test corpus");
    if (slots[*idx]) throw Error(Errc::DuplicateId, at_line(row.line) + "id '" + id + "'");
    if (text::trim(row.values[1]).empty()) {
      throw Error(Errc::EmptyText, at_line(row.line) + "id '" + id + "'");
    }
    slots[*idx] = row.values[1];
  }

  std::vector<TransformedPair> pairs;
  pairs.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) throw Error(Errc::MissingId, "id '" + test_corpus[i].id + "' has no transformed text");
    pairs.push_back({test_corpus[i].id, std::move(*slots[i])});
  }
  return pairs;
}

std::vector<TransformedPair> load_transformed(const std::filesystem::path& path, FileFormat format,
                                              const Corpus& test_corpus) {
  auto in = open_input(path);
  try {
    return read_transformed(in, format, test_corpus);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<ConstraintViolation> check_transformation_constraints(
    TransformationKind kind, const Corpus& corpus, std::span<const TransformedPair> pairs) {
  std::vector<ConstraintViolation> out;
  if (kind != TransformationKind::Paraphrase && kind != TransformationKind::Summarization) return out;

  for (const auto& pair : pairs) {
    const auto idx = corpus.find(pair.id);
    if (!idx) continue;
    const std::string original = text::canonical(corpus[*idx].text);
    const std::string transformed = text::canonical(pair.transformed_text);
    if (kind == TransformationKind::Paraphrase) {
      if (original == transformed) out.push_back({pair.id, "paraphrase identical to original"});
    } else {
      const auto before = text::scalar_count(original);
      const auto after = text::scalar_count(transformed);
      if (after >= before) {
        out.push_back({pair.id, "summary not shorter than original (" + std::to_string(after) +
                                    " >= " + std::to_string(before) + " characters)"});
      }
    }
  }
  return out;
}

void write_violations(std::ostream& out, std::span<const ConstraintViolation> violations) {
  for (const auto& v : violations) out << v.id << '\t' << v.reason << '\n';
}

MappedCorpus map_labels(const Corpus& corpus, const std::map<std::string, std::string>& mapping,
                        const PropertySchema& new_schema) {
  for (const auto& [from, to] : mapping) {
    if (!new_schema.contains(to)) {
      throw Error(Errc::InvalidMapping, "'" + from + "' maps to '" + to + "' outside property '" +
                                            new_schema.name() + "'");
    }
  }
  std::vector<LabeledInstance> kept;
  kept.reserve(corpus.size());
  std::size_t dropped = 0;
  for (const auto& inst : corpus.instances()) {
    const auto it = mapping.find(inst.label);
    if (it == mapping.end()) {
      ++dropped;
      continue;
    }
    kept.push_back({inst.id, inst.text, it->second});
  }
  return {Corpus(new_schema, corpus.split(), std::move(kept)), dropped};
}

}  // namespace lipeval
