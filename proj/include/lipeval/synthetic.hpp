#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lipeval/corpus.hpp"

namespace lipeval::synthetic {

/// Marker tokens that fully determine the label of a planted document.
inline constexpr std::string_view kMarkerM = "qzxq";
inline constexpr std::string_view kMarkerF = "jkvj";

struct PlantedOptions {
  std::size_t documents = 2000;  // split evenly into train and test
  double flip_fraction = 0.2;    // share of test documents moved from F to M
  std::uint64_t seed = 7;
  bool identity = false;         // transformed text == original text
};

/// Synthetic author-gender corpus over labels {M, F}. Filler words never
/// contain the marker letters. The transformation rewrites every test
/// document (so a paraphrase constraint holds) and swaps the F marker for
/// the M marker in round(flip_fraction * test size) documents.
struct PlantedFixture {
  Corpus train;
  Corpus test;
  std::vector<TransformedPair> transformed;
  std::vector<std::string> flipped_ids;
};

PropertySchema planted_schema();
PlantedFixture make_planted_fixture(const PlantedOptions& options = {});

void write_corpus_tsv(std::ostream& out, const Corpus& corpus);
void write_transformed_tsv(std::ostream& out, std::span<const TransformedPair> pairs);

}  // namespace lipeval::synthetic
