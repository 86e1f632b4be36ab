#include <doctest.h>

#include <sstream>

#include "lipeval/classifier.hpp"
#include "lipeval/harness.hpp"
#include "lipeval/report.hpp"
#include "lipeval/synthetic.hpp"
#include "support.hpp"

using namespace lipeval;
using namespace lipeval::testing;

namespace {

std::vector<Document> documents(const Corpus& c) {
  std::vector<Document> out;
  for (const auto& i : c.instances()) out.push_back({i.id, i.text});
  return out;
}

std::shared_ptr<const ClassifierModel> tfidf_model(const Corpus& train_corpus) {
  auto vocab = build_vocabulary(train_corpus);
  const auto x = featurize(train_corpus.texts(), vocab);
  return std::make_shared<const ClassifierModel>(
      train(x, train_corpus.labels(), train_corpus.schema(), {.lambda = 0.001}, std::move(vocab)));
}

}  // namespace

TEST_CASE("precomputed predictions replay a file") {
  const auto schema = synthetic::planted_schema();
  std::istringstream in("a\tM\nb\tM\tc\t0\n");
  CHECK_THROWS_AS(PrecomputedClassifier::read(in, schema), Error);

  std::istringstream ok("a\tM\nb\tF\t0.25\t0.75\n");
  const auto c = PrecomputedClassifier::read(ok, schema);
  CHECK(c.size() == 2);
  const std::vector<Document> docs{{"b", "ignored"}, {"a", "ignored"}};
  const auto p = c.predict(docs);
  CHECK(p[0].id == "b");
  CHECK(p[0].label == "F");
  CHECK(p[0].probabilities[1] == 0.75);
  CHECK(p[1].probabilities[0] == 1.0);
}

TEST_CASE("all-M replay gives a point mass") {
  const auto schema = synthetic::planted_schema();
  std::istringstream in("1\tM\n2\tM\n3\tM\n");
  const auto c = PrecomputedClassifier::read(in, schema);
  std::vector<std::string> labels;
  for (const auto& p : c.predict(std::vector<Document>{{"1", ""}, {"2", ""}, {"3", ""}})) labels.push_back(p.label);
  const auto d = distribution_from_labels(labels, schema);
  CHECK(d.prob("M") == 1.0);
  CHECK(d.prob("F") == 0.0);
}

TEST_CASE("precomputed errors") {
  const auto schema = synthetic::planted_schema();
  std::istringstream unknown("a\tX\n");
  CHECK(code_of([&] { PrecomputedClassifier::read(unknown, schema); }) == Errc::UnknownLabel);
  std::istringstream dup("a\tM\na\tF\n");
  CHECK(code_of([&] { PrecomputedClassifier::read(dup, schema); }) == Errc::DuplicateId);
  std::istringstream bad_sum("a\tM\t0.7\t0.7\n");
  CHECK(code_of([&] { PrecomputedClassifier::read(bad_sum, schema); }) == Errc::MalformedRow);
  std::istringstream one("a\tM\n");
  const auto c = PrecomputedClassifier::read(one, schema);
  CHECK(code_of([&] { c.predict(std::vector<Document>{{"zz", "t"}}); }) == Errc::MissingId);
}

TEST_CASE("tf-idf classifier learns the planted markers") {
  const auto fx = synthetic::make_planted_fixture({.documents = 200});
  const TfidfClassifier clf(tfidf_model(fx.train));
  const auto p = clf.predict(documents(fx.test));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < p.size(); ++i) correct += p[i].label == fx.test[i].label;
  CHECK(static_cast<double>(correct) / fx.test.size() >= 0.99);
  CHECK(clf.describe().find("tf") != std::string::npos);
}

TEST_CASE("embedding classifier looks vectors up by id") {
  const PropertySchema schema("p", {"A", "B"});
  auto table = std::make_shared<EmbeddingTable>(2);
  table->insert("a1", {1.0f, 0.1f});
  table->insert("a2", {0.9f, -0.2f});
  table->insert("b1", {-1.0f, 0.0f});
  table->insert("b2", {-0.8f, 0.3f});
  const std::vector<std::string> ids{"a1", "a2", "b1", "b2"};
  const auto x = dense_matrix(ids, *table);
  auto model = std::make_shared<const ClassifierModel>(
      train(x, std::vector<std::string>{"A", "A", "B", "B"}, schema, {.lambda = 0.01}));
  const EmbeddingClassifier clf(model, table);
  const auto p = clf.predict(std::vector<Document>{{"b2", "whatever"}, {"a1", "text"}});
  CHECK(p[0].label == "B");
  CHECK(p[1].label == "A");
  CHECK(code_of([&] { clf.predict(std::vector<Document>{{"nope", ""}}); }) == Errc::MissingEmbedding);

  auto wrong = std::make_shared<EmbeddingTable>(3);
  CHECK(code_of([&] { EmbeddingClassifier{model, wrong}; }) == Errc::DimMismatch);
  CHECK_THROWS_AS(TfidfClassifier{model}, Error);
}

TEST_CASE("replaying a dump reproduces the report") {
  const auto fx = synthetic::make_planted_fixture({.documents = 200, .flip_fraction = 0.2});
  const auto schema = synthetic::planted_schema();
  auto clf = std::make_shared<const TfidfClassifier>(tfidf_model(fx.train));
  const EvaluationTask task{schema, TransformationKind::Paraphrase, fx.test, fx.transformed, clf, clf};
  const auto live = evaluate(task);

  std::ostringstream po, pt;
  write_predictions(po, live.predictions_po);
  write_predictions(pt, live.predictions_pt);
  std::istringstream po_in(po.str()), pt_in(pt.str());
  auto replay_po = std::make_shared<const PrecomputedClassifier>(PrecomputedClassifier::read(po_in, schema));
  auto replay_pt = std::make_shared<const PrecomputedClassifier>(PrecomputedClassifier::read(pt_in, schema));
  const EvaluationTask again{schema, TransformationKind::Paraphrase, fx.test, fx.transformed, replay_po, replay_pt};
  const auto replayed = evaluate(again);

  CHECK(report_json(replayed) == report_json(live));
  CHECK(plot_tsv(replayed) == plot_tsv(live));
}
