#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "lipeval/harness.hpp"

namespace lipeval {

/// JSON report with keys dist_o, dist_po, dist_pt, kl_o_po, kl_o_pt, chi2,
/// diagnosis, violations (plus counts and metadata). Distributions keep the
/// canonical label order; floats use shortest round-trip formatting.
std::string report_json(const EvaluationReport& report);

/// `label<TAB>dist_o<TAB>dist_po<TAB>dist_pt` with a header line.
std::string plot_tsv(const EvaluationReport& report);

/// Human-readable table for the terminal.
std::string summary_text(const EvaluationReport& report);

/// A `label<TAB>value` file, as accepted by `lipeval score`. Integral
/// values are counts; anything else is a probability vector.
struct LabelTable {
  std::vector<std::string> labels;
  std::vector<double> values;
  bool integral = true;
};

LabelTable read_label_table(std::istream& in);
LabelTable load_label_table(const std::filesystem::path& path);

struct ScoreResult {
  LabelDistribution dist_o;
  std::optional<LabelDistribution> dist_po;
  LabelDistribution dist_pt;
  std::optional<double> kl_o_po;
  double kl_o_pt = 0.0;
  /// PO vs PT when PO is given, otherwise O vs PT; needs count tables.
  std::optional<ChiSquareResult> chi2;
  std::string chi2_note;
};

/// Scores tables against the label order of `o`. Tables must cover the same
/// label set (order may differ).
ScoreResult score_tables(const LabelTable& o, const LabelTable& pt, const std::optional<LabelTable>& po,
                         double epsilon = 1e-9);

std::string score_text(const ScoreResult& result);

}  // namespace lipeval
