#include "lipeval/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <optional>
#include <sstream>

#include "lipeval/atomic_file.hpp"
#include "lipeval/classifier.hpp"
#include "lipeval/config.hpp"
#include "lipeval/error.hpp"
#include "lipeval/numeric_text.hpp"
#include "lipeval/report.hpp"

namespace lipeval::cli {
namespace {

namespace fs = std::filesystem;

struct TrainArgs {
  std::string train;
  std::string schema;
  std::string property = "property";
  std::string classifier = "tf";
  std::string embeddings;
  std::string format;
  std::string out;
  TrainConfig config;
  int n_min = 2;
  int n_max = 6;
  std::size_t min_df = 1;
};

struct EvaluateArgs {
  std::string original;
  std::string transformed;
  std::string kind;
  std::string format;
  std::string model_source;
  std::string model_target;
  std::string predictions_original;
  std::string predictions_transformed;
  std::string schema;
  std::string property = "property";
  std::string embeddings_original;
  std::string embeddings_transformed;
  double threshold = 0.05;
  double epsilon = 1e-9;
  std::string report;
  std::string plot;
  std::string dump_po;
  std::string dump_pt;
};

struct ScoreArgs {
  std::string dist_o;
  std::string dist_po;
  std::string dist_pt;
  double epsilon = 1e-9;
};

struct InspectArgs {
  std::string model;
  std::string corpus;
  std::string schema;
  std::string embeddings;
  std::string format;
};

FileFormat resolve_format(const std::string& flag, const fs::path& path) {
  return flag.empty() ? format_from_path(path) : parse_format(flag);
}

std::string join_counts(const LabelCounts& c) {
  std::string s;
  for (std::size_t i = 0; i < c.counts().size(); ++i) {
    if (i) s += ' ';
    s += c.schema().label(i) + "=" + std::to_string(c[i]);
  }
  return s;
}

void write_text(const fs::path& path, const std::string& content) {
  write_file_atomically(path, [&](std::ostream& o) { o << content; });
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const auto schema = PropertySchema::from_csv(a.property, a.schema);
  const fs::path path(a.train);
  const Corpus corpus = load_corpus(path, resolve_format(a.format, path), schema, Split::Train);
  const auto labels = corpus.labels();

  std::optional<ClassifierModel> model;
  std::string features;
  if (a.classifier == "tf") {
    auto vocab = build_vocabulary(corpus, a.n_min, a.n_max, a.min_df);
    features = "char " + std::to_string(a.n_min) + "-" + std::to_string(a.n_max) + "-gram TF-IDF, vocabulary " +
               std::to_string(vocab.size());
    const auto x = featurize(corpus.texts(), vocab);
    model.emplace(train(x, labels, schema, a.config, std::move(vocab)));
  } else {
    const auto table = load_embeddings(a.embeddings);
    features = "embeddings, dim " + std::to_string(table.dim());
    model.emplace(train(dense_matrix(corpus.ids(), table), labels, schema, a.config));
  }
  save_model(a.out, *model);

  const auto& s = model->summary();
  out << "training rows: " << corpus.size() << '\n';
  out << "label counts: " << join_counts(counts_from_labels(labels, schema)) << '\n';
  out << "features: " << features << '\n';
  out << "final loss: " << format_double(s.final_loss) << " after " << s.iterations << " iterations ("
      << (s.converged ? "converged" : "max_iters reached") << ", gradient norm " << format_double(s.gradient_norm)
      << ")\n";
  out << "model: " << a.out << '\n';
  return kOk;
}

std::shared_ptr<const Classifier> make_classifier(std::shared_ptr<const ClassifierModel> model,
                                                  const std::string& embeddings, std::string_view side) {
  if (model->feature_kind() == FeatureKind::Sparse) return std::make_shared<TfidfClassifier>(model);
  if (embeddings.empty()) {
    throw Error(Errc::InvalidArgument, "dense model needs --embeddings-" + std::string(side));
  }
  auto table = std::make_shared<const EmbeddingTable>(load_embeddings(embeddings));
  return std::make_shared<EmbeddingClassifier>(model, table);
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  std::shared_ptr<const Classifier> source;
  std::shared_ptr<const Classifier> target;
  if (!a.model_source.empty()) {
    auto model_source = std::make_shared<const ClassifierModel>(load_model(a.model_source));
    source = make_classifier(model_source, a.embeddings_original, "original");
    if (a.model_target.empty() && model_source->feature_kind() == FeatureKind::Sparse) {
      target = source;  // one classifier for both sides
    } else {
      auto model_target = a.model_target.empty()
                              ? model_source
                              : std::make_shared<const ClassifierModel>(load_model(a.model_target));
      target = make_classifier(model_target, a.embeddings_transformed, "transformed");
    }
  } else {
    const auto schema = PropertySchema::from_csv(a.property, a.schema);
    source = precomputed_classifier(a.predictions_original, schema);
    target = precomputed_classifier(a.predictions_transformed, schema);
  }

  const auto& schema = source->schema();
  const fs::path original_path(a.original);
  const fs::path transformed_path(a.transformed);
  Corpus original = load_corpus(original_path, resolve_format(a.format, original_path), schema, Split::Test);
  auto pairs = load_transformed(transformed_path, resolve_format(a.format, transformed_path), original);

  EvaluationTask task{schema, parse_kind(a.kind), std::move(original), std::move(pairs), source, target,
                      a.threshold, a.epsilon};
  const auto report = evaluate(task);

  write_text(a.report, report_json(report));
  if (!a.plot.empty()) write_text(a.plot, plot_tsv(report));
  if (!a.dump_po.empty()) {
    write_file_atomically(a.dump_po, [&](std::ostream& o) { write_predictions(o, report.predictions_po); });
  }
  if (!a.dump_pt.empty()) {
    write_file_atomically(a.dump_pt, [&](std::ostream& o) { write_predictions(o, report.predictions_pt); });
  }
  out << summary_text(report);
  return kOk;
}

int cmd_score(const ScoreArgs& a, std::ostream& out) {
  const auto o = load_label_table(a.dist_o);
  const auto pt = load_label_table(a.dist_pt);
  std::optional<LabelTable> po;
  if (!a.dist_po.empty()) po = load_label_table(a.dist_po);
  out << score_text(score_tables(o, pt, po, a.epsilon));
  return kOk;
}

int cmd_inspect(const InspectArgs& a, std::ostream& out) {
  if (!a.model.empty()) {
    const auto m = load_model(a.model);
    out << "model: " << a.model << '\n';
    out << "property: " << m.schema().name() << '\n';
    out << "labels:";
    for (const auto& l : m.schema().labels()) out << ' ' << l;
    out << '\n';
    out << "features: " << to_string(m.feature_kind()) << ", dim " << m.dim() << '\n';
    if (m.vocabulary()) {
      out << "vocabulary: " << m.vocabulary()->size() << " grams, n=" << m.vocabulary()->n_min() << ".."
          << m.vocabulary()->n_max() << ", " << m.vocabulary()->corpus_size() << " documents\n";
    }
    out << "lambda: " << format_double(m.config().lambda) << "  max_iters: " << m.config().max_iters
        << "  tolerance: " << format_double(m.config().tolerance) << '\n';
    out << "training rows: " << m.summary().training_rows << "  iterations: " << m.summary().iterations
        << "  final loss: " << format_double(m.summary().final_loss)
        << (m.summary().converged ? "  (converged)" : "  (max_iters reached)") << '\n';
  }
  if (!a.corpus.empty()) {
    const auto schema = PropertySchema::from_csv("property", a.schema);
    const fs::path path(a.corpus);
    const auto corpus = load_corpus(path, resolve_format(a.format, path), schema);
    const auto counts = counts_from_labels(corpus.labels(), schema);
    const auto dist = counts.distribution();
    out << "corpus: " << a.corpus << "  instances: " << corpus.size() << '\n';
    for (std::size_t i = 0; i < schema.size(); ++i) {
      out << schema.label(i) << '\t' << counts[i] << '\t' << format_double(dist[i]) << '\n';
    }
  }
  if (!a.embeddings.empty()) {
    const auto t = load_embeddings(a.embeddings);
    out << "embeddings: " << a.embeddings << "  rows: " << t.size() << "  dim: " << t.dim() << '\n';
  }
  return kOk;
}

int cmd_run(const std::string& config, std::ostream& out) {
  const auto result = run_from_config(config);
  out << summary_text(result.report);
  for (const auto& p : result.written) out << "wrote " << p.string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Language-invariant property evaluation: train LIP classifiers, score transformations."};
  app.name("lipeval");
  app.require_subcommand(1);

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "Train a LIP classifier and write a model dump");
  train_cmd->add_option("--train", ta.train, "Training corpus (id, text, label)")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--schema", ta.schema, "Comma-separated labels, e.g. M,F")->required();
  train_cmd->add_option("--property", ta.property, "Property name")->capture_default_str();
  train_cmd->add_option("--classifier", ta.classifier, "tf | embed")
      ->check(CLI::IsMember({"tf", "embed"}))
      ->capture_default_str();
  train_cmd->add_option("--embeddings", ta.embeddings, "Embedding file for --classifier embed")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--format", ta.format, "tsv | csv | jsonl (default: by extension)")
      ->check(CLI::IsMember({"tsv", "csv", "jsonl"}));
  train_cmd->add_option("--lambda", ta.config.lambda, "L2 strength")->capture_default_str();
  train_cmd->add_option("--max-iters", ta.config.max_iters, "Iteration cap")->capture_default_str();
  train_cmd->add_option("--tolerance", ta.config.tolerance, "Gradient-norm stop")->capture_default_str();
  train_cmd->add_option("--seed", ta.config.seed, "Recorded in the model")->capture_default_str();
  train_cmd->add_option("--n-min", ta.n_min, "Shortest char n-gram")->capture_default_str();
  train_cmd->add_option("--n-max", ta.n_max, "Longest char n-gram")->capture_default_str();
  train_cmd->add_option("--min-df", ta.min_df, "Minimum document frequency")->capture_default_str();
  train_cmd->add_option("--out", ta.out, "Model output path")->required();

  EvaluateArgs ea;
  auto* eval_cmd = app.add_subcommand("evaluate", "Compare O, PO and PT for a transformed test set");
  eval_cmd->add_option("--original", ea.original, "Original test corpus (gold labels)")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--transformed", ea.transformed, "Transformed texts (id, text)")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--kind", ea.kind, "Transformation kind")
      ->required()
      ->check(CLI::IsMember({"translation", "paraphrase", "summarization", "style-transfer", "identity", "custom"}));
  eval_cmd->add_option("--format", ea.format, "tsv | csv | jsonl (default: by extension)")
      ->check(CLI::IsMember({"tsv", "csv", "jsonl"}));
  auto* ms = eval_cmd->add_option("--model-source", ea.model_source, "Model applied to the originals")->check(CLI::ExistingFile);
  eval_cmd->add_option("--model-target", ea.model_target, "Model applied to the transformed texts (default: source)")
      ->check(CLI::ExistingFile)
      ->needs(ms);
  auto* po = eval_cmd->add_option("--predictions-original", ea.predictions_original, "Precomputed PO predictions")
                 ->check(CLI::ExistingFile)
                 ->excludes(ms);
  auto* pt = eval_cmd->add_option("--predictions-transformed", ea.predictions_transformed, "Precomputed PT predictions")
                 ->check(CLI::ExistingFile)
                 ->excludes(ms);
  po->needs(pt);
  pt->needs(po);
  eval_cmd->add_option("--schema", ea.schema, "Comma-separated labels (precomputed predictions only)");
  eval_cmd->add_option("--property", ea.property, "Property name (precomputed predictions only)")->capture_default_str();
  eval_cmd->add_option("--embeddings-original", ea.embeddings_original, "Embeddings of the originals (dense models)")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--embeddings-transformed", ea.embeddings_transformed, "Embeddings of the transformed texts")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--threshold", ea.threshold, "Bias-diagnosis threshold")->capture_default_str();
  eval_cmd->add_option("--epsilon", ea.epsilon, "KL smoothing")->capture_default_str();
  eval_cmd->add_option("--report", ea.report, "JSON report path")->required();
  eval_cmd->add_option("--plot", ea.plot, "Plot data TSV path");
  eval_cmd->add_option("--dump-po", ea.dump_po, "Write PO predictions (replayable)");
  eval_cmd->add_option("--dump-pt", ea.dump_pt, "Write PT predictions (replayable)");

  ScoreArgs sa;
  auto* score_cmd = app.add_subcommand("score", "KL and chi-square from distribution or count files");
  score_cmd->add_option("--dist-o", sa.dist_o, "label<TAB>value file for O")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--dist-pt", sa.dist_pt, "label<TAB>value file for PT")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--dist-po", sa.dist_po, "label<TAB>value file for PO")->check(CLI::ExistingFile);
  score_cmd->add_option("--epsilon", sa.epsilon, "KL smoothing")->capture_default_str();

  InspectArgs ia;
  auto* inspect_cmd = app.add_subcommand("inspect", "Describe a model, corpus or embedding file");
  inspect_cmd->add_option("--model", ia.model, "Model dump")->check(CLI::ExistingFile);
  auto* ic = inspect_cmd->add_option("--corpus", ia.corpus, "Corpus file")->check(CLI::ExistingFile);
  auto* is = inspect_cmd->add_option("--schema", ia.schema, "Comma-separated labels for --corpus");
  ic->needs(is);
  inspect_cmd->add_option("--embeddings", ia.embeddings, "Embedding file")->check(CLI::ExistingFile);
  inspect_cmd->add_option("--format", ia.format, "tsv | csv | jsonl")->check(CLI::IsMember({"tsv", "csv", "jsonl"}));

  std::string config;
  auto* run_cmd = app.add_subcommand("run", "Run an evaluation described by a config file");
  run_cmd->add_option("--config", config, "key = value config")->required()->check(CLI::ExistingFile);

  std::vector<std::string> argv_store{"lipeval"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (*train_cmd && ta.classifier == "embed" && ta.embeddings.empty()) {
      throw CLI::ValidationError("--embeddings", "required with --classifier embed");
    }
    if (*eval_cmd && ea.model_source.empty() && ea.predictions_original.empty()) {
      throw CLI::ValidationError("--model-source", "give --model-source or --predictions-original/--predictions-transformed");
    }
    if (*eval_cmd && !ea.predictions_original.empty() && ea.schema.empty()) {
      throw CLI::ValidationError("--schema", "required with precomputed predictions");
    }
    if (*inspect_cmd && ia.model.empty() && ia.corpus.empty() && ia.embeddings.empty()) {
      throw CLI::ValidationError("inspect", "give --model, --corpus or --embeddings");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*train_cmd) return cmd_train(ta, out);
    if (*eval_cmd) return cmd_evaluate(ea, out);
    if (*score_cmd) return cmd_score(sa, out);
    if (*inspect_cmd) return cmd_inspect(ia, out);
    if (*run_cmd) return cmd_run(config, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace lipeval::cli
