#include "lipeval/harness.hpp"

#include <cmath>

#include "lipeval/error.hpp"

namespace lipeval {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::NoBias: return "NoBias";
    case Verdict::ClassifierBias: return "ClassifierBias";
    case Verdict::TransformationBias: return "TransformationBias";
    case Verdict::Mixed: return "Mixed";
  }
  return "Mixed";
}

BiasDiagnosis diagnose_bias(const LabelDistribution& dist_o, const LabelDistribution& dist_po,
                            const LabelDistribution& dist_pt, double threshold) {
  if (!dist_o.schema().same_labels(dist_po.schema()) || !dist_o.schema().same_labels(dist_pt.schema())) {
    throw Error(Errc::SchemaMismatch, "diagnosis over different label sets");
  }
  if (!(threshold > 0.0)) throw Error(Errc::InvalidArgument, "threshold must be positive");

  BiasDiagnosis out;
  out.threshold = threshold;
  bool any_skew = false;
  bool all_consistent = true;
  bool transformation = false;
  const auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };

  for (std::size_t l = 0; l < dist_o.probs().size(); ++l) {
    const double dpo = dist_po[l] - dist_o[l];
    const double dpt = dist_pt[l] - dist_o[l];
    out.deviations.push_back({dist_o.schema().label(l), dpo, dpt});

    const bool po_skew = std::abs(dpo) > threshold;
    const bool pt_skew = std::abs(dpt) > threshold;
    if (!po_skew && !pt_skew) continue;
    any_skew = true;
    if (!(po_skew && pt_skew && sign(dpo) == sign(dpt))) all_consistent = false;
    if ((pt_skew && !po_skew) || sign(dpo) * sign(dpt) < 0) transformation = true;
  }

  if (!any_skew) {
    out.verdict = Verdict::NoBias;
  } else if (all_consistent) {
    out.verdict = Verdict::ClassifierBias;
  } else if (transformation) {
    out.verdict = Verdict::TransformationBias;
  } else {
    out.verdict = Verdict::Mixed;
  }
  return out;
}

namespace {

std::vector<std::string> labels_of(const std::vector<Prediction>& preds) {
  std::vector<std::string> out;
  out.reserve(preds.size());
  for (const auto& p : preds) out.push_back(p.label);
  return out;
}

void check_predictions(const std::vector<Prediction>& preds, const std::vector<Document>& docs,
                       std::string_view side) {
  if (preds.size() != docs.size()) {
    throw Error(Errc::DimensionMismatch, std::string(side) + " classifier returned " +
                                             std::to_string(preds.size()) + " predictions for " +
                                             std::to_string(docs.size()) + " documents");
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].id != docs[i].id) {
      throw Error(Errc::DimensionMismatch, std::string(side) + " predictions out of order at '" + docs[i].id + "'");
    }
  }
}

}  // namespace

EvaluationReport evaluate(const EvaluationTask& task) {
  const auto& schema = task.property;
  const auto& original = task.test_original;
  if (!task.classifier_source || !task.classifier_target) {
    throw Error(Errc::InvalidArgument, "evaluation needs source and target classifiers");
  }
  if (!original.schema().same_labels(schema) || !task.classifier_source->schema().same_labels(schema) ||
      !task.classifier_target->schema().same_labels(schema)) {
    throw Error(Errc::SchemaMismatch, "corpus and classifiers must share the labels of '" + schema.name() + "'");
  }
  if (original.empty()) throw Error(Errc::EmptyCorpus, "no original texts");

  // Alignment is checked before any prediction or statistic.
  if (task.transformed.size() != original.size()) {
    throw Error(Errc::MissingId, std::to_string(task.transformed.size()) + " transformed texts for " +
                                     std::to_string(original.size()) + " originals");
  }
  std::vector<Document> docs_o;
  std::vector<Document> docs_t;
  docs_o.reserve(original.size());
  docs_t.reserve(original.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    if (task.transformed[i].id != original[i].id) {
      throw Error(Errc::MissingId, "transformed texts not aligned at position " + std::to_string(i) +
                                       " (expected id '" + original[i].id + "')");
    }
    docs_o.push_back({original[i].id, original[i].text});
    docs_t.push_back({task.transformed[i].id, task.transformed[i].transformed_text});
  }

  auto violations = check_transformation_constraints(task.kind, original, task.transformed);

  auto po = task.classifier_source->predict(docs_o);
  check_predictions(po, docs_o, "source");
  auto pt = task.classifier_target->predict(docs_t);
  check_predictions(pt, docs_t, "target");

  const auto gold = original.labels();
  auto counts_o = counts_from_labels(gold, schema);
  auto counts_po = counts_from_labels(labels_of(po), schema);
  auto counts_pt = counts_from_labels(labels_of(pt), schema);
  auto dist_o = counts_o.distribution();
  auto dist_po = counts_po.distribution();
  auto dist_pt = counts_pt.distribution();

  const auto chi2 = homogeneity_test(counts_po, counts_pt);

  const double kl_po = kl_divergence(dist_o, dist_po, task.epsilon);
  const double kl_pt = kl_divergence(dist_o, dist_pt, task.epsilon);
  auto diagnosis = diagnose_bias(dist_o, dist_po, dist_pt, task.threshold);

  return EvaluationReport{schema,
                          task.kind,
                          original.size(),
                          std::move(dist_o),
                          std::move(dist_po),
                          std::move(dist_pt),
                          std::move(counts_o),
                          std::move(counts_po),
                          std::move(counts_pt),
                          kl_po,
                          kl_pt,
                          chi2,
                          std::move(diagnosis),
                          std::move(violations),
                          std::move(po),
                          std::move(pt)};
}

}  // namespace lipeval
