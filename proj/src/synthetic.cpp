#include "lipeval/synthetic.hpp"

#include <cmath>
#include <random>

#include "lipeval/error.hpp"
#include "lipeval/text.hpp"

namespace lipeval::synthetic {
namespace {

constexpr std::string_view kConsonants = "bcdfghlmnprst";
constexpr std::string_view kVowels = "aeiou";

std::vector<std::string> make_lexicon(std::mt19937_64& rng, std::size_t size) {
  std::vector<std::string> words;
  words.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t syllables = 1 + rng() % 3;
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
      w.push_back(kConsonants[rng() % kConsonants.size()]);
      w.push_back(kVowels[rng() % kVowels.size()]);
    }
    words.push_back(std::move(w));
  }
  return words;
}

std::vector<std::string> filler(std::mt19937_64& rng, const std::vector<std::string>& lexicon) {
  const std::size_t n = 6 + rng() % 10;
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(lexicon[rng() % lexicon.size()]);
  return out;
}

std::string join_with_marker(const std::vector<std::string>& words, std::size_t marker_pos, std::string_view marker) {
  std::string s;
  for (std::size_t i = 0; i <= words.size(); ++i) {
    if (i == marker_pos) {
      if (!s.empty()) s += ' ';
      s += marker;
    }
    if (i < words.size()) {
      if (!s.empty()) s += ' ';
      s += words[i];
    }
  }
  return s;
}

}  // namespace

PropertySchema planted_schema() { return PropertySchema("author-gender", {"M", "F"}); }

PlantedFixture make_planted_fixture(const PlantedOptions& options) {
  if (options.documents < 4) throw Error(Errc::InvalidArgument, "planted fixture needs at least 4 documents");
  if (!(options.flip_fraction >= 0.0 && options.flip_fraction <= 0.5)) {
    throw Error(Errc::InvalidArgument, "flip fraction must lie in [0, 0.5]");
  }
  std::mt19937_64 rng(options.seed);
  const auto lexicon = make_lexicon(rng, 300);
  const auto schema = planted_schema();

  const std::size_t n_train = options.documents / 2;
  const std::size_t n_test = options.documents - n_train;

  struct Draft {
    std::vector<std::string> words;
    std::size_t marker_pos;
    bool male;
  };
  const auto draft = [&](std::size_t i) {
    Draft d{filler(rng, lexicon), 0, i % 2 == 0};
    d.marker_pos = rng() % (d.words.size() + 1);
    return d;
  };

  std::vector<LabeledInstance> train;
  for (std::size_t i = 0; i < n_train; ++i) {
    const auto d = draft(i);
    train.push_back({"tr" + std::to_string(i), join_with_marker(d.words, d.marker_pos, d.male ? kMarkerM : kMarkerF),
                     d.male ? "M" : "F"});
  }

  std::vector<Draft> test_drafts;
  std::vector<LabeledInstance> test;
  for (std::size_t i = 0; i < n_test; ++i) {
    test_drafts.push_back(draft(i));
    const auto& d = test_drafts.back();
    test.push_back({"te" + std::to_string(i), join_with_marker(d.words, d.marker_pos, d.male ? kMarkerM : kMarkerF),
                    d.male ? "M" : "F"});
  }

  // Pick which F documents get the M marker: a seeded shuffle of F positions.
  std::vector<std::size_t> female;
  for (std::size_t i = 0; i < n_test; ++i) {
    if (!test_drafts[i].male) female.push_back(i);
  }
  for (std::size_t i = female.size(); i > 1; --i) std::swap(female[i - 1], female[rng() % i]);
  const auto flips = static_cast<std::size_t>(std::llround(options.flip_fraction * static_cast<double>(n_test)));
  if (flips > female.size()) throw Error(Errc::InvalidArgument, "not enough F documents to flip");
  std::vector<bool> flip(n_test, false);
  for (std::size_t k = 0; k < flips; ++k) flip[female[k]] = true;

  PlantedFixture out{Corpus(schema, Split::Train, std::move(train)), Corpus(schema, Split::Test, test), {}, {}};
  for (std::size_t i = 0; i < n_test; ++i) {
    if (options.identity) {
      out.transformed.push_back({test[i].id, test[i].text});
      continue;
    }
    // Surface rewrite: filler words in reverse order, marker kept in place.
    auto words = test_drafts[i].words;
    std::reverse(words.begin(), words.end());
    const bool male = test_drafts[i].male || flip[i];
    out.transformed.push_back({test[i].id, join_with_marker(words, test_drafts[i].marker_pos, male ? kMarkerM : kMarkerF) + " indeed"});
    if (flip[i]) out.flipped_ids.push_back(test[i].id);
  }
  return out;
}

void write_corpus_tsv(std::ostream& out, const Corpus& corpus) {
  out << "id\ttext\tlabel\n";
  for (const auto& i : corpus.instances()) {
    out << i.id << '\t' << text::escape_tsv(i.text) << '\t' << i.label << '\n';
  }
}

void write_transformed_tsv(std::ostream& out, std::span<const TransformedPair> pairs) {
  out << "id\ttext\n";
  for (const auto& p : pairs) out << p.id << '\t' << text::escape_tsv(p.transformed_text) << '\n';
}

}  // namespace lipeval::synthetic
