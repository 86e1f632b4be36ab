#include <doctest.h>

#include "lipeval/text.hpp"

using namespace lipeval;

TEST_CASE("nfc composes decomposed sequences") {
  // "e" + combining acute -> U+00E9
  CHECK(text::nfc("caf\x65\xCC\x81") == "caf\xC3\xA9");
  CHECK(text::nfc("plain") == "plain");
}

TEST_CASE("trim strips unicode whitespace only at the ends") {
  CHECK(text::trim("  a b \t\n") == "a b");
  CHECK(text::trim("\xE2\x80\x83x\xC2\xA0") == "x");  // em space, no-break space
  CHECK(text::trim(" \t ").empty());
}

TEST_CASE("normalize_for_ngrams lowercases and collapses whitespace") {
  CHECK(text::normalize_for_ngrams("Ab  CD\t\nE") == "ab cd e");
  CHECK(text::normalize_for_ngrams("\xC3\x89T\xC3\x89") == "\xC3\xA9t\xC3\xA9");
  CHECK(text::normalize_for_ngrams("E\xCC\x81") == "\xC3\xA9");
}

TEST_CASE("scalar_count counts code points, not bytes") {
  CHECK(text::scalar_count("abc") == 3);
  CHECK(text::scalar_count("\xC3\xA9t\xC3\xA9") == 3);
  CHECK(text::scalar_count("\xF0\x9F\x98\x80") == 1);
}

TEST_CASE("utf8 validation") {
  CHECK(text::is_valid_utf8("h\xC3\xA9llo"));
  CHECK_FALSE(text::is_valid_utf8("\xC3"));
  CHECK_FALSE(text::is_valid_utf8("\xC0\xAF"));       // overlong
  CHECK_FALSE(text::is_valid_utf8("\xED\xA0\x80"));   // surrogate
}

TEST_CASE("tsv escapes round trip") {
  const std::string raw = "a\tb\nc\\d\re";
  CHECK(text::escape_tsv(raw) == "a\\tb\\nc\\\\d\\re");
  CHECK(text::unescape_tsv(text::escape_tsv(raw)) == raw);
  CHECK(text::unescape_tsv("C:\\x") == "C:\\x");
}
