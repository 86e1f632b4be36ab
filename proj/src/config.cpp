#include "lipeval/config.hpp"

#include <algorithm>

#include "lipeval/atomic_file.hpp"
#include "lipeval/error.hpp"
#include "lipeval/numeric_text.hpp"
#include "lipeval/report.hpp"
#include "lipeval/text.hpp"

namespace lipeval {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "property",         "labels",           "kind",
      "format",           "train",            "train_target",
      "test",             "transformed",      "classifier",
      "lambda",           "max_iters",        "tolerance",
      "seed",             "n_min",            "n_max",
      "min_df",           "embeddings_train", "embeddings_train_target",
      "embeddings_test",  "embeddings_transformed", "predictions_original",
      "predictions_transformed", "threshold", "epsilon",
      "report",           "plot",             "model_source_out",
      "model_target_out"};
  return keys;
}

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& msg) {
  throw Error(Errc::InvalidConfig, "'" + key + "': " + msg);
}

template <typename F>
auto field(const std::string& key, F&& parse) {
  try {
    return parse();
  } catch (const Error& e) {
    bad(key, e.what());
  }
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::InvalidConfig, "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = text::trim(std::string_view(trimmed).substr(0, eq));
    const std::string value = text::trim(std::string_view(trimmed).substr(eq + 1));
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) bad(key, "unknown key");
    if (!kv.emplace(key, value).second) bad(key, "given twice");
  }

  const auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end() || it->second.empty()) return std::nullopt;
    return it->second;
  };
  const auto require = [&](const std::string& key) {
    auto v = get(key);
    if (!v) bad(key, "required");
    return *v;
  };
  const auto path = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  };
  const auto opt_path = [&](const std::string& key) -> std::optional<std::filesystem::path> {
    if (auto v = get(key)) return path(*v);
    return std::nullopt;
  };

  RunConfig c;
  if (auto v = get("property")) c.property = *v;
  {
    const auto labels = require("labels");
    c.labels = field("labels", [&] {
      auto s = PropertySchema::from_csv(c.property, labels);
      return std::vector<std::string>(s.labels().begin(), s.labels().end());
    });
  }
  c.kind = field("kind", [&] { return parse_kind(require("kind")); });
  if (auto v = get("format")) c.format = field("format", [&] { return parse_format(*v); });

  c.train = opt_path("train");
  c.train_target = opt_path("train_target");
  c.test = path(require("test"));
  c.transformed = path(require("transformed"));

  if (auto v = get("classifier")) {
    if (*v == "tf") c.classifier = ClassifierChoice::Tfidf;
    else if (*v == "embed") c.classifier = ClassifierChoice::Embedding;
    else if (*v == "precomputed") c.classifier = ClassifierChoice::Precomputed;
    else bad("classifier", "expected tf, embed or precomputed");
  }
  if (auto v = get("lambda")) c.training.lambda = field("lambda", [&] { return parse_double(*v, "lambda"); });
  if (auto v = get("max_iters")) {
    c.training.max_iters = field("max_iters", [&] { return static_cast<int>(parse_integer(*v, "max_iters")); });
  }
  if (auto v = get("tolerance")) c.training.tolerance = field("tolerance", [&] { return parse_double(*v, "tolerance"); });
  if (auto v = get("seed")) c.training.seed = field("seed", [&] { return static_cast<std::uint64_t>(parse_integer(*v, "seed")); });
  field("lambda", [&] { c.training.validate(); return 0; });
  if (auto v = get("n_min")) c.n_min = field("n_min", [&] { return static_cast<int>(parse_integer(*v, "n_min")); });
  if (auto v = get("n_max")) c.n_max = field("n_max", [&] { return static_cast<int>(parse_integer(*v, "n_max")); });
  if (c.n_min < 1 || c.n_max < c.n_min) bad("n_min", "need 1 <= n_min <= n_max");
  if (auto v = get("min_df")) c.min_df = field("min_df", [&] { return static_cast<std::size_t>(parse_integer(*v, "min_df")); });

  c.embeddings_train = opt_path("embeddings_train");
  c.embeddings_train_target = opt_path("embeddings_train_target");
  c.embeddings_test = opt_path("embeddings_test");
  c.embeddings_transformed = opt_path("embeddings_transformed");
  c.predictions_original = opt_path("predictions_original");
  c.predictions_transformed = opt_path("predictions_transformed");

  if (auto v = get("threshold")) c.threshold = field("threshold", [&] { return parse_double(*v, "threshold"); });
  if (!(c.threshold > 0.0)) bad("threshold", "must be positive");
  if (auto v = get("epsilon")) c.epsilon = field("epsilon", [&] { return parse_double(*v, "epsilon"); });
  if (!(c.epsilon > 0.0)) bad("epsilon", "must be positive");

  c.report = path(require("report"));
  c.plot = opt_path("plot");
  c.model_source_out = opt_path("model_source_out");
  c.model_target_out = opt_path("model_target_out");

  switch (c.classifier) {
    case ClassifierChoice::Tfidf:
      if (!c.train) bad("train", "required for classifier = tf");
      break;
    case ClassifierChoice::Embedding:
      if (!c.train) bad("train", "required for classifier = embed");
      if (!c.embeddings_train) bad("embeddings_train", "required for classifier = embed");
      if (!c.embeddings_test) bad("embeddings_test", "required for classifier = embed");
      if (!c.embeddings_transformed) bad("embeddings_transformed", "required for classifier = embed");
      if (c.train_target && !c.embeddings_train_target) {
        bad("embeddings_train_target", "required when train_target is set with classifier = embed");
      }
      break;
    case ClassifierChoice::Precomputed:
      if (!c.predictions_original) bad("predictions_original", "required for classifier = precomputed");
      if (!c.predictions_transformed) bad("predictions_transformed", "required for classifier = precomputed");
      break;
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_config(in, path.parent_path());
}

namespace {

FileFormat format_for(const RunConfig& c, const std::filesystem::path& p) {
  return c.format ? *c.format : format_from_path(p);
}

std::shared_ptr<const ClassifierModel> train_model(const RunConfig& c, const PropertySchema& schema,
                                                   const std::filesystem::path& train_path,
                                                   const std::optional<std::filesystem::path>& embeddings) {
  const Corpus corpus = load_corpus(train_path, format_for(c, train_path), schema, Split::Train);
  const auto labels = corpus.labels();
  if (c.classifier == ClassifierChoice::Tfidf) {
    auto vocab = build_vocabulary(corpus, c.n_min, c.n_max, c.min_df);
    const auto x = featurize(corpus.texts(), vocab);
    return std::make_shared<const ClassifierModel>(train(x, labels, schema, c.training, std::move(vocab)));
  }
  const auto table = load_embeddings(*embeddings);
  const auto x = dense_matrix(corpus.ids(), table);
  return std::make_shared<const ClassifierModel>(train(x, labels, schema, c.training));
}

}  // namespace

RunResult run(const RunConfig& c) {
  const PropertySchema schema(c.property, c.labels);
  Corpus original = load_corpus(c.test, format_for(c, c.test), schema, Split::Test);
  auto pairs = load_transformed(c.transformed, format_for(c, c.transformed), original);

  std::shared_ptr<const Classifier> source;
  std::shared_ptr<const Classifier> target;
  std::shared_ptr<const ClassifierModel> model_source;
  std::shared_ptr<const ClassifierModel> model_target;

  switch (c.classifier) {
    case ClassifierChoice::Tfidf: {
      model_source = train_model(c, schema, *c.train, std::nullopt);
      model_target = c.train_target ? train_model(c, schema, *c.train_target, std::nullopt) : model_source;
      source = std::make_shared<TfidfClassifier>(model_source);
      target = model_target == model_source ? source : std::make_shared<TfidfClassifier>(model_target);
      break;
    }
    case ClassifierChoice::Embedding: {
      model_source = train_model(c, schema, *c.train, c.embeddings_train);
      model_target = c.train_target ? train_model(c, schema, *c.train_target, c.embeddings_train_target)
                                    : model_source;
      auto test_table = std::make_shared<const EmbeddingTable>(load_embeddings(*c.embeddings_test));
      auto transformed_table = *c.embeddings_transformed == *c.embeddings_test
                                   ? test_table
                                   : std::make_shared<const EmbeddingTable>(load_embeddings(*c.embeddings_transformed));
      source = std::make_shared<EmbeddingClassifier>(model_source, test_table);
      target = std::make_shared<EmbeddingClassifier>(model_target, transformed_table);
      break;
    }
    case ClassifierChoice::Precomputed: {
      source = precomputed_classifier(*c.predictions_original, schema);
      target = precomputed_classifier(*c.predictions_transformed, schema);
      break;
    }
  }

  EvaluationTask task{schema, c.kind, std::move(original), std::move(pairs), source, target, c.threshold, c.epsilon};
  RunResult result{evaluate(task), {}};

  const auto json = report_json(result.report);
  write_file_atomically(c.report, [&](std::ostream& out) { out << json; });
  result.written.push_back(c.report);
  if (c.plot) {
    const auto tsv = plot_tsv(result.report);
    write_file_atomically(*c.plot, [&](std::ostream& out) { out << tsv; });
    result.written.push_back(*c.plot);
  }
  if (c.model_source_out && model_source) {
    save_model(*c.model_source_out, *model_source);
    result.written.push_back(*c.model_source_out);
  }
  if (c.model_target_out && model_target) {
    save_model(*c.model_target_out, *model_target);
    result.written.push_back(*c.model_target_out);
  }
  return result;
}

RunResult run_from_config(const std::filesystem::path& path) { return run(load_config(path)); }

}  // namespace lipeval
