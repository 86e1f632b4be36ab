#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lipeval/classifier.hpp"
#include "lipeval/corpus.hpp"
#include "lipeval/stats.hpp"

namespace lipeval {

enum class Verdict { NoBias, ClassifierBias, TransformationBias, Mixed };

std::string_view to_string(Verdict verdict);

struct LabelDeviation {
  std::string label;
  double po = 0.0;  // PO(label) - O(label)
  double pt = 0.0;  // PT(label) - O(label)
};

struct BiasDiagnosis {
  Verdict verdict = Verdict::NoBias;
  double threshold = 0.05;
  std::vector<LabelDeviation> deviations;
};

/// Classifier bias: every label skewed beyond `threshold` is skewed by both
/// PO and PT, in the same direction. Transformation bias: some label is
/// skewed by PT but not by PO, or PO and PT deviate in opposite directions
/// on a skewed label. Nothing skewed is NoBias; anything else is Mixed.
BiasDiagnosis diagnose_bias(const LabelDistribution& dist_o, const LabelDistribution& dist_po,
                            const LabelDistribution& dist_pt, double threshold = 0.05);

struct EvaluationTask {
  PropertySchema property;
  TransformationKind kind = TransformationKind::Custom;
  Corpus test_original;
  std::vector<TransformedPair> transformed;
  std::shared_ptr<const Classifier> classifier_source;
  std::shared_ptr<const Classifier> classifier_target;  // same object for monolingual tasks
  double threshold = 0.05;
  double epsilon = 1e-9;
};

struct EvaluationReport {
  PropertySchema property;
  TransformationKind kind = TransformationKind::Custom;
  std::size_t instances = 0;
  LabelDistribution dist_o;
  LabelDistribution dist_po;
  LabelDistribution dist_pt;
  LabelCounts counts_o;
  LabelCounts counts_po;
  LabelCounts counts_pt;
  double kl_o_po = 0.0;
  double kl_o_pt = 0.0;
  ChiSquareResult chi2;  // PO vs PT counts
  BiasDiagnosis diagnosis;
  std::vector<ConstraintViolation> violations;
  std::vector<Prediction> predictions_po;
  std::vector<Prediction> predictions_pt;
};

/// Runs the source classifier on the originals (PO) and the target
/// classifier on the transformed texts (PT), then scores both against the
/// gold distribution of the originals (O).
EvaluationReport evaluate(const EvaluationTask& task);

}  // namespace lipeval
