#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lipeval {

enum class FileFormat { Tsv, Csv, Jsonl };

FileFormat parse_format(std::string_view name);
std::string_view to_string(FileFormat format);

/// Guesses the format from the extension (.tsv, .csv, .jsonl/.json); TSV otherwise.
FileFormat format_from_path(const std::filesystem::path& path);

std::ifstream open_input(const std::filesystem::path& path);

namespace io {

/// One data row projected onto the requested columns. `line` is the 1-based
/// physical line the record starts on.
struct Row {
  std::size_t line = 0;
  std::vector<std::string> values;
};

/// Reads a table in any supported format and returns, for each record, the
/// values of `columns` in the order given. Extra columns are ignored.
/// TSV cells are unescaped; CSV follows RFC-4180; JSONL rows are objects.
std::vector<Row> read_table(std::istream& in, FileFormat format,
                            std::span<const std::string_view> columns);

}  // namespace io
}  // namespace lipeval
