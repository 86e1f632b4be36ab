#include "lipeval/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>

#include "lipeval/error.hpp"
#include "lipeval/kernels.hpp"
#include "lipeval/text.hpp"

namespace lipeval {

Vocabulary::Vocabulary(int n_min, int n_max, std::size_t corpus_size, std::vector<std::string> grams,
                       std::vector<std::uint32_t> document_frequencies)
    : n_min_(n_min),
      n_max_(n_max),
      corpus_size_(corpus_size),
      grams_(std::move(grams)),
      df_(std::move(document_frequencies)) {
  if (n_min_ < 1 || n_max_ < n_min_) {
    throw Error(Errc::InvalidArgument, "n-gram range must satisfy 1 <= n_min <= n_max");
  }
  if (grams_.size() != df_.size()) {
    throw Error(Errc::InvalidArgument, "vocabulary grams and frequencies differ in length");
  }
  idf_.reserve(df_.size());
  index_.reserve(grams_.size());
  const double n1 = 1.0 + static_cast<double>(corpus_size_);
  for (std::size_t i = 0; i < grams_.size(); ++i) {
    if (df_[i] < 1 || df_[i] > corpus_size_) {
      throw Error(Errc::InvalidArgument, "document frequency out of range for gram '" + grams_[i] + "'");
    }
    if (i > 0 && !(grams_[i - 1] < grams_[i])) {
      throw Error(Errc::InvalidArgument, "vocabulary grams must be strictly increasing");
    }
    idf_.push_back(std::log(n1 / (1.0 + df_[i])) + 1.0);
    index_.emplace(grams_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view gram) const {
  const auto it = index_.find(gram);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string_view to_string(FeatureKind kind) { return kind == FeatureKind::Sparse ? "sparse" : "dense"; }

FeatureKind parse_feature_kind(std::string_view name) {
  if (name == "sparse") return FeatureKind::Sparse;
  if (name == "dense") return FeatureKind::Dense;
  throw Error(Errc::InvalidArgument, "unknown feature kind '" + std::string(name) + "'");
}

FeatureMatrix FeatureMatrix::sparse(std::size_t cols, std::vector<std::size_t> row_ptr,
                                    std::vector<std::uint32_t> indices, std::vector<double> values) {
  if (row_ptr.empty() || row_ptr.front() != 0 || row_ptr.back() != indices.size() ||
      indices.size() != values.size()) {
    throw Error(Errc::InvalidArgument, "inconsistent CSR layout");
  }
  for (std::size_t r = 0; r + 1 < row_ptr.size(); ++r) {
    if (row_ptr[r + 1] < row_ptr[r]) throw Error(Errc::InvalidArgument, "row pointers decrease");
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      if (indices[k] >= cols || (k > row_ptr[r] && indices[k] <= indices[k - 1])) {
        throw Error(Errc::InvalidArgument, "sparse indices must be increasing and < cols");
      }
    }
  }
  FeatureMatrix m;
  m.kind_ = FeatureKind::Sparse;
  m.rows_ = row_ptr.size() - 1;
  m.cols_ = cols;
  m.row_ptr_ = std::move(row_ptr);
  m.indices_ = std::move(indices);
  m.values_ = std::move(values);
  return m;
}

FeatureMatrix FeatureMatrix::dense(std::size_t rows, std::size_t cols, std::vector<double> values) {
  if (values.size() != rows * cols) throw Error(Errc::InvalidArgument, "dense matrix size mismatch");
  FeatureMatrix m;
  m.kind_ = FeatureKind::Dense;
  m.rows_ = rows;
  m.cols_ = cols;
  m.values_ = std::move(values);
  return m;
}

FeatureMatrix::SparseRow FeatureMatrix::sparse_row(std::size_t i) const {
  const std::size_t b = row_ptr_[i];
  const std::size_t e = row_ptr_[i + 1];
  return {std::span(indices_).subspan(b, e - b), std::span(values_).subspan(b, e - b)};
}

std::span<const double> FeatureMatrix::dense_row(std::size_t i) const {
  return std::span(values_).subspan(i * cols_, cols_);
}

double FeatureMatrix::dot(std::size_t i, std::span<const double> w) const {
  double s = 0.0;
  if (kind_ == FeatureKind::Sparse) {
    const auto row = sparse_row(i);
    for (std::size_t k = 0; k < row.indices.size(); ++k) s += row.values[k] * w[row.indices[k]];
  } else {
    const auto row = dense_row(i);
    for (std::size_t j = 0; j < cols_; ++j) s += row[j] * w[j];
  }
  return s;
}

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw Error(Errc::InvalidArgument, "embedding dim must be positive");
}

void EmbeddingTable::insert(std::string id, std::vector<float> vector) {
  if (vector.size() != dim_) {
    throw Error(Errc::DimMismatch, "id '" + id + "' has " + std::to_string(vector.size()) +
                                       " values, expected " + std::to_string(dim_));
  }
  if (index_.contains(id)) throw Error(Errc::DuplicateId, "embedding id '" + id + "'");
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  vectors_.push_back(std::move(vector));
}

const std::vector<float>* EmbeddingTable::find(std::string_view id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &vectors_[it->second];
}

Vocabulary build_vocabulary(std::span<const std::string> texts, int n_min, int n_max,
                            std::size_t min_df) {
  if (texts.empty()) throw Error(Errc::EmptyCorpus, "cannot build a vocabulary from no documents");
  if (n_min < 1 || n_max < n_min) {
    throw Error(Errc::InvalidArgument, "n-gram range must satisfy 1 <= n_min <= n_max");
  }

  std::vector<std::string> normalized(texts.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < texts.size(); ++i) normalized[i] = text::normalize_for_ngrams(texts[i]);

  // Integer document counts; order of accumulation does not matter.
  std::unordered_map<std::string_view, std::uint32_t> df;
  std::vector<std::string_view> doc;
  for (const auto& t : normalized) {
    doc = kernels::ngrams(t, n_min, n_max);
    std::sort(doc.begin(), doc.end());
    doc.erase(std::unique(doc.begin(), doc.end()), doc.end());
    for (const auto g : doc) ++df[g];
  }

  std::vector<std::pair<std::string_view, std::uint32_t>> kept;
  kept.reserve(df.size());
  for (const auto& [g, count] : df) {
    if (count >= min_df) kept.emplace_back(g, count);
  }
  std::sort(kept.begin(), kept.end());

  std::vector<std::string> grams;
  std::vector<std::uint32_t> freqs;
  grams.reserve(kept.size());
  freqs.reserve(kept.size());
  for (const auto& [g, count] : kept) {
    grams.emplace_back(g);
    freqs.push_back(count);
  }
  return Vocabulary(n_min, n_max, texts.size(), std::move(grams), std::move(freqs));
}

Vocabulary build_vocabulary(const Corpus& corpus, int n_min, int n_max, std::size_t min_df) {
  const auto texts = corpus.texts();
  return build_vocabulary(texts, n_min, n_max, min_df);
}

FeatureMatrix featurize(std::span<const std::string> texts, const Vocabulary& vocab) {
  return kernels::omp::featurize(texts, vocab);
}

EmbeddingTable read_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::MalformedRow, "embedding file is empty");
  constexpr std::string_view kPrefix = "dim=";
  std::size_t dim = 0;
  {
    const std::string_view head(line);
    const auto digits = head.substr(std::min(head.size(), kPrefix.size()));
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dim);
    if (!head.starts_with(kPrefix) || digits.empty() || ec != std::errc() ||
        ptr != digits.data() + digits.size() || dim == 0) {
      throw Error(Errc::MalformedRow, "line 1: expected 'dim=<positive integer>'");
    }
  }

  EmbeddingTable table(dim);
  std::size_t lineno = 1;
  std::vector<float> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string_view row(line);
    const auto tab = row.find('\t');
    const std::string id(row.substr(0, tab));
    if (id.empty()) throw Error(Errc::MalformedRow, "line " + std::to_string(lineno) + ": empty id");
    values.clear();
    std::size_t pos = tab;
    while (pos != std::string_view::npos) {
      const std::size_t next = row.find('\t', pos + 1);
      const auto cell = row.substr(pos + 1, next == std::string_view::npos ? row.npos : next - pos - 1);
      float v = 0.0f;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw Error(Errc::MalformedFloat, "line " + std::to_string(lineno) + ": id '" + id +
                                              "': cannot parse '" + std::string(cell) + "'");
      }
      values.push_back(v);
      pos = next;
    }
    if (values.size() != dim) {
      throw Error(Errc::DimMismatch, "line " + std::to_string(lineno) + ": id '" + id + "' has " +
                                         std::to_string(values.size()) + " values, expected " +
                                         std::to_string(dim));
    }
    table.insert(id, values);
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_embeddings(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
  out << "dim=" << table.dim() << '\n';
  char buf[64];
  for (const auto& id : table.ids()) {
    out << id;
    for (const float v : *table.find(id)) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out << '\t' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

FeatureMatrix dense_matrix(std::span<const std::string> ids, const EmbeddingTable& table) {
  std::vector<double> values;
  values.reserve(ids.size() * table.dim());
  for (const auto& id : ids) {
    const auto* v = table.find(id);
    if (v == nullptr) throw Error(Errc::MissingEmbedding, "no embedding for id '" + id + "'");
    values.insert(values.end(), v->begin(), v->end());
  }
  return FeatureMatrix::dense(ids.size(), table.dim(), std::move(values));
}

}  // namespace lipeval
