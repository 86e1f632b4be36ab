#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lipeval/corpus.hpp"

namespace lipeval {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

/// Character n-gram vocabulary with document frequencies. Column indices
/// follow lexicographic (byte) order of the UTF-8 grams.
class Vocabulary {
 public:
  Vocabulary(int n_min, int n_max, std::size_t corpus_size, std::vector<std::string> grams,
             std::vector<std::uint32_t> document_frequencies);

  int n_min() const noexcept { return n_min_; }
  int n_max() const noexcept { return n_max_; }
  std::size_t corpus_size() const noexcept { return corpus_size_; }
  std::size_t size() const noexcept { return grams_.size(); }

  const std::string& gram(std::size_t column) const { return grams_.at(column); }
  std::uint32_t df(std::size_t column) const { return df_.at(column); }
  /// ln((1 + N) / (1 + df)) + 1
  double idf(std::size_t column) const { return idf_.at(column); }
  std::optional<std::uint32_t> index_of(std::string_view gram) const;

  std::span<const std::string> grams() const noexcept { return grams_; }
  std::span<const std::uint32_t> document_frequencies() const noexcept { return df_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.n_min_ == b.n_min_ && a.n_max_ == b.n_max_ && a.corpus_size_ == b.corpus_size_ &&
           a.grams_ == b.grams_ && a.df_ == b.df_;
  }

 private:
  int n_min_;
  int n_max_;
  std::size_t corpus_size_;
  std::vector<std::string> grams_;
  std::vector<std::uint32_t> df_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> index_;
};

enum class FeatureKind { Sparse, Dense };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view name);

/// Row-major document vectors. Sparse rows are CSR with strictly increasing
/// column indices; dense rows are contiguous.
class FeatureMatrix {
 public:
  struct SparseRow {
    std::span<const std::uint32_t> indices;
    std::span<const double> values;
  };

  static FeatureMatrix sparse(std::size_t cols, std::vector<std::size_t> row_ptr,
                              std::vector<std::uint32_t> indices, std::vector<double> values);
  static FeatureMatrix dense(std::size_t rows, std::size_t cols, std::vector<double> values);

  FeatureKind kind() const noexcept { return kind_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  SparseRow sparse_row(std::size_t i) const;
  std::span<const double> dense_row(std::size_t i) const;

  /// <row i, w> for a weight vector of length cols().
  double dot(std::size_t i, std::span<const double> w) const;

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::uint32_t> indices() const noexcept { return indices_; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  FeatureMatrix() = default;

  FeatureKind kind_ = FeatureKind::Sparse;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
};

/// Externally produced sentence embeddings keyed by instance id.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  void insert(std::string id, std::vector<float> vector);
  const std::vector<float>* find(std::string_view id) const;
  std::span<const std::string> ids() const noexcept { return ids_; }

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.dim_ == b.dim_ && a.ids_ == b.ids_ && a.vectors_ == b.vectors_;
  }

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<std::vector<float>> vectors_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
};

Vocabulary build_vocabulary(std::span<const std::string> texts, int n_min = 2, int n_max = 6,
                            std::size_t min_df = 1);
Vocabulary build_vocabulary(const Corpus& corpus, int n_min = 2, int n_max = 6,
                            std::size_t min_df = 1);

/// TF-IDF rows: raw counts times smoothed idf, L2-normalized. Grams absent
/// from the vocabulary are ignored. Runs the OpenMP kernel.
FeatureMatrix featurize(std::span<const std::string> texts, const Vocabulary& vocab);

EmbeddingTable read_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::filesystem::path& path);
/// Shortest round-trip decimal for each float.
void write_embeddings(std::ostream& out, const EmbeddingTable& table);

/// Rows in `ids` order, values as exported (no re-normalization).
FeatureMatrix dense_matrix(std::span<const std::string> ids, const EmbeddingTable& table);

}  // namespace lipeval
