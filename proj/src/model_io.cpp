#include <charconv>
#include <fstream>

#include "lipeval/atomic_file.hpp"
#include "lipeval/error.hpp"
#include "lipeval/model.hpp"
#include "lipeval/numeric_text.hpp"
#include "lipeval/text.hpp"

namespace lipeval {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(Errc::MalformedFloat, std::string(what) + ": cannot parse '" + std::string(s) + "'");
  }
  return v;
}

long long parse_integer(std::string_view s, std::string_view what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(Errc::InvalidArgument, std::string(what) + ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

namespace {

constexpr std::string_view kMagic = "lipeval-model\t1";

void write_row(std::ostream& out, std::string_view key, std::span<const double> values) {
  out << key;
  for (const double v : values) out << '\t' << format_double(v);
  out << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string_view> fields(std::string_view key, std::size_t min_fields = 2) {
    if (!std::getline(in_, line_)) fail("unexpected end of file, wanted '" + std::string(key) + "'");
    ++lineno_;
    auto f = split(line_, '\t');
    if (f.front() != key) fail("expected '" + std::string(key) + "', found '" + std::string(f.front()) + "'");
    if (f.size() < min_fields) fail("'" + std::string(key) + "' has too few fields");
    return f;
  }

  std::string_view value(std::string_view key) {
    auto f = fields(key);
    if (f.size() != 2) fail("'" + std::string(key) + "' takes one value");
    return f[1];
  }

  std::vector<std::string_view> raw() {
    if (!std::getline(in_, line_)) fail("unexpected end of file");
    ++lineno_;
    return split(line_, '\t');
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::MalformedModel, "line " + std::to_string(lineno_) + ": " + msg);
  }

  std::size_t lineno() const { return lineno_; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t lineno_ = 1;  // header already consumed
};

}  // namespace

void write_model(std::ostream& out, const ClassifierModel& model) {
  const auto& schema = model.schema();
  const auto& cfg = model.config();
  const auto& sum = model.summary();
  out << kMagic << '\n';
  out << "property\t" << text::escape_tsv(schema.name()) << '\n';
  out << "labels";
  for (const auto& l : schema.labels()) out << '\t' << text::escape_tsv(l);
  out << '\n';
  out << "feature_kind\t" << to_string(model.feature_kind()) << '\n';
  out << "dim\t" << model.dim() << '\n';
  out << "lambda\t" << format_double(cfg.lambda) << '\n';
  out << "max_iters\t" << cfg.max_iters << '\n';
  out << "tolerance\t" << format_double(cfg.tolerance) << '\n';
  out << "seed\t" << cfg.seed << '\n';
  out << "training_rows\t" << sum.training_rows << '\n';
  out << "iterations\t" << sum.iterations << '\n';
  out << "final_loss\t" << format_double(sum.final_loss) << '\n';
  out << "gradient_norm\t" << format_double(sum.gradient_norm) << '\n';
  out << "converged\t" << (sum.converged ? 1 : 0) << '\n';
  if (const auto& vocab = model.vocabulary()) {
    out << "vocabulary\t" << vocab->n_min() << '\t' << vocab->n_max() << '\t' << vocab->corpus_size() << '\t'
        << vocab->size() << '\n';
    for (std::size_t i = 0; i < vocab->size(); ++i) {
      out << text::escape_tsv(vocab->gram(i)) << '\t' << vocab->df(i) << '\n';
    }
  } else {
    out << "vocabulary\tnone\n";
  }
  write_row(out, "biases", model.biases());
  for (std::size_t c = 0; c < model.classes(); ++c) {
    out << "weights\t" << text::escape_tsv(schema.label(c));
    for (const double w : model.weights(c)) out << '\t' << format_double(w);
    out << '\n';
  }
  out << "end\n";
}

ClassifierModel read_model(std::istream& in) {
  LineReader r(in);
  {
    std::string head;
    if (!std::getline(in, head) || head != kMagic) throw Error(Errc::MalformedModel, "not a lipeval model (bad header)");
  }
  try {
    const std::string property = text::unescape_tsv(r.value("property"));
    std::vector<std::string> labels;
    {
      const auto f = r.fields("labels", 3);
      for (std::size_t i = 1; i < f.size(); ++i) labels.push_back(text::unescape_tsv(f[i]));
    }
    PropertySchema schema(property, labels);
    const FeatureKind kind = parse_feature_kind(r.value("feature_kind"));
    const auto dim = static_cast<std::size_t>(parse_integer(r.value("dim"), "dim"));

    TrainConfig cfg;
    cfg.lambda = parse_double(r.value("lambda"), "lambda");
    cfg.max_iters = static_cast<int>(parse_integer(r.value("max_iters"), "max_iters"));
    cfg.tolerance = parse_double(r.value("tolerance"), "tolerance");
    cfg.seed = static_cast<std::uint64_t>(parse_integer(r.value("seed"), "seed"));

    TrainingSummary sum;
    sum.training_rows = static_cast<std::size_t>(parse_integer(r.value("training_rows"), "training_rows"));
    sum.iterations = static_cast<int>(parse_integer(r.value("iterations"), "iterations"));
    sum.final_loss = parse_double(r.value("final_loss"), "final_loss");
    sum.gradient_norm = parse_double(r.value("gradient_norm"), "gradient_norm");
    sum.converged = parse_integer(r.value("converged"), "converged") != 0;

    std::optional<Vocabulary> vocab;
    {
      const auto f = r.fields("vocabulary");
      if (!(f.size() == 2 && f[1] == "none")) {
        if (f.size() != 5) r.fail("vocabulary header needs n_min n_max corpus_size size");
        const int n_min = static_cast<int>(parse_integer(f[1], "n_min"));
        const int n_max = static_cast<int>(parse_integer(f[2], "n_max"));
        const auto corpus_size = static_cast<std::size_t>(parse_integer(f[3], "corpus_size"));
        const auto size = static_cast<std::size_t>(parse_integer(f[4], "vocabulary size"));
        std::vector<std::string> grams;
        std::vector<std::uint32_t> df;
        grams.reserve(size);
        df.reserve(size);
        for (std::size_t i = 0; i < size; ++i) {
          const auto g = r.raw();
          if (g.size() != 2) r.fail("vocabulary entry needs gram and df");
          grams.push_back(text::unescape_tsv(g[0]));
          df.push_back(static_cast<std::uint32_t>(parse_integer(g[1], "df")));
        }
        vocab.emplace(n_min, n_max, corpus_size, std::move(grams), std::move(df));
      }
    }

    std::vector<double> biases;
    {
      const auto f = r.fields("biases");
      for (std::size_t i = 1; i < f.size(); ++i) biases.push_back(parse_double(f[i], "bias"));
    }
    std::vector<double> weights;
    weights.reserve(schema.size() * dim);
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const auto f = r.fields("weights");
      if (f.size() != dim + 2) r.fail("weight row has wrong length");
      if (text::unescape_tsv(f[1]) != schema.label(c)) r.fail("weight rows out of label order");
      for (std::size_t j = 2; j < f.size(); ++j) weights.push_back(parse_double(f[j], "weight"));
    }
    r.fields("end", 1);
    return ClassifierModel(std::move(schema), kind, dim, std::move(weights), std::move(biases), cfg,
                           std::move(vocab), sum);
  } catch (const Error& e) {
    if (e.code() == Errc::MalformedModel) throw;
    throw Error(Errc::MalformedModel, "line " + std::to_string(r.lineno()) + ": " + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ClassifierModel& model) {
  write_file_atomically(path, [&](std::ostream& out) { write_model(out, model); });
}

ClassifierModel load_model(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_model(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace lipeval
