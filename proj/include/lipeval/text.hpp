#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lipeval::text {

bool is_valid_utf8(std::string_view s);

/// Unicode NFC normalization of a UTF-8 string.
std::string nfc(std::string_view s);

/// Strips leading and trailing Unicode whitespace.
std::string trim(std::string_view s);

/// NFC then trim; the form compared by the paraphrase constraint.
std::string canonical(std::string_view s);

/// Number of Unicode scalar values in a valid UTF-8 string.
std::size_t scalar_count(std::string_view s);

/// Featurizer preprocessing: NFC, full lowercase, NFC again, and every run
/// of Unicode whitespace replaced by one U+0020.
std::string normalize_for_ngrams(std::string_view s);

/// Byte offset of every code point start plus a final entry for s.size().
std::vector<std::uint32_t> code_point_offsets(std::string_view s);

/// Backslash escapes used inside TSV cells: \t \n \r and \\.
std::string unescape_tsv(std::string_view s);
std::string escape_tsv(std::string_view s);

}  // namespace lipeval::text
