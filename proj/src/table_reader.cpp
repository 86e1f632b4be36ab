#include "lipeval/table_reader.hpp"

#include <algorithm>
#include <json.hpp>
#include <optional>

#include "lipeval/error.hpp"
#include "lipeval/text.hpp"

namespace lipeval {

FileFormat parse_format(std::string_view name) {
  if (name == "tsv") return FileFormat::Tsv;
  if (name == "csv") return FileFormat::Csv;
  if (name == "jsonl") return FileFormat::Jsonl;
  throw Error(Errc::InvalidArgument, "unknown format '" + std::string(name) + "' (tsv|csv|jsonl)");
}

std::string_view to_string(FileFormat format) {
  switch (format) {
    case FileFormat::Tsv: return "tsv";
    case FileFormat::Csv: return "csv";
    case FileFormat::Jsonl: return "jsonl";
  }
  return "tsv";
}

FileFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".csv") return FileFormat::Csv;
  if (ext == ".jsonl" || ext == ".json") return FileFormat::Jsonl;
  return FileFormat::Tsv;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
  return in;
}

namespace io {
namespace {

std::string line_ref(std::size_t line) { return "line " + std::to_string(line); }

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

std::vector<std::size_t> locate_columns(const std::vector<std::string>& header,
                                        std::span<const std::string_view> columns) {
  std::vector<std::size_t> where;
  for (const auto col : columns) {
    const auto it = std::find(header.begin(), header.end(), col);
    if (it == header.end()) {
      throw Error(Errc::MissingColumn, "header lacks column '" + std::string(col) + "'");
    }
    where.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  return where;
}

void check_utf8(const std::vector<std::string>& values, std::size_t line) {
  for (const auto& v : values) {
    if (!text::is_valid_utf8(v)) throw Error(Errc::MalformedRow, line_ref(line) + ": invalid UTF-8");
  }
}

bool getline_lf(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<Row> read_tsv(std::istream& in, std::span<const std::string_view> columns) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::vector<std::string>> header;
  std::vector<std::size_t> where;
  std::vector<Row> rows;
  while (getline_lf(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_tabs(line);
    if (!header) {
      header = std::move(cells);
      where = locate_columns(*header, columns);
      continue;
    }
    if (cells.size() != header->size()) {
      throw Error(Errc::MalformedRow, line_ref(lineno) + ": expected " +
                                          std::to_string(header->size()) + " fields, found " +
                                          std::to_string(cells.size()));
    }
    Row row{lineno, {}};
    for (const auto idx : where) row.values.push_back(text::unescape_tsv(cells[idx]));
    check_utf8(row.values, lineno);
    rows.push_back(std::move(row));
  }
  if (!header) throw Error(Errc::MissingColumn, "empty file: header row required");
  return rows;
}

// RFC-4180 record reader. Returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& lineno,
                     std::size_t& start_line) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;
  ++lineno;
  start_line = lineno;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  while (true) {
    if (c == EOF) {
      if (quoted) throw Error(Errc::MalformedRow, line_ref(start_line) + ": unterminated quote");
      fields.push_back(std::move(field));
      return true;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++lineno;
        field.push_back(ch);
      }
    } else if (ch == '"') {
      if (!field.empty() || field_was_quoted) {
        throw Error(Errc::MalformedRow, line_ref(lineno) + ": stray quote inside field");
      }
      quoted = true;
      field_was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (ch == '\r' && in.peek() == '\n') {
      // CRLF terminator
    } else if (ch == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else {
      if (field_was_quoted) {
        throw Error(Errc::MalformedRow, line_ref(lineno) + ": text after closing quote");
      }
      field.push_back(ch);
    }
    c = in.get();
  }
}

std::vector<Row> read_csv(std::istream& in, std::span<const std::string_view> columns) {
  std::vector<std::string> fields;
  std::size_t lineno = 0;
  std::size_t start = 0;
  std::optional<std::vector<std::string>> header;
  std::vector<std::size_t> where;
  std::vector<Row> rows;
  while (read_csv_record(in, fields, lineno, start)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (!header) {
      header = fields;
      where = locate_columns(*header, columns);
      continue;
    }
    if (fields.size() != header->size()) {
      throw Error(Errc::MalformedRow, line_ref(start) + ": expected " +
                                          std::to_string(header->size()) + " fields, found " +
                                          std::to_string(fields.size()));
    }
    Row row{start, {}};
    for (const auto idx : where) row.values.push_back(fields[idx]);
    check_utf8(row.values, start);
    rows.push_back(std::move(row));
  }
  if (!header) throw Error(Errc::MissingColumn, "empty file: header row required");
  return rows;
}

std::vector<Row> read_jsonl(std::istream& in, std::span<const std::string_view> columns) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<Row> rows;
  while (getline_lf(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::MalformedRow, line_ref(lineno) + ": " + e.what());
    }
    if (!obj.is_object()) throw Error(Errc::MalformedRow, line_ref(lineno) + ": not a JSON object");
    Row row{lineno, {}};
    for (const auto col : columns) {
      const auto it = obj.find(std::string(col));
      if (it == obj.end()) {
        throw Error(Errc::MissingColumn, line_ref(lineno) + ": missing key '" + std::string(col) + "'");
      }
      if (it->is_string()) {
        row.values.push_back(it->get<std::string>());
      } else if (it->is_number_integer()) {
        row.values.push_back(it->dump());
      } else {
        throw Error(Errc::MalformedRow,
                    line_ref(lineno) + ": key '" + std::string(col) + "' must be a string");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<Row> read_table(std::istream& in, FileFormat format,
                            std::span<const std::string_view> columns) {
  switch (format) {
    case FileFormat::Tsv: return read_tsv(in, columns);
    case FileFormat::Csv: return read_csv(in, columns);
    case FileFormat::Jsonl: return read_jsonl(in, columns);
  }
  return {};
}

}  // namespace io
}  // namespace lipeval
