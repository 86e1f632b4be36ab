#include "lipeval/report.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "lipeval/error.hpp"
#include "lipeval/numeric_text.hpp"

namespace lipeval {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json dist_json(const LabelDistribution& d) {
  ordered_json j = ordered_json::object();
  for (std::size_t i = 0; i < d.probs().size(); ++i) j[d.schema().label(i)] = d[i];
  return j;
}

ordered_json counts_json(const LabelCounts& c) {
  ordered_json j = ordered_json::object();
  for (std::size_t i = 0; i < c.counts().size(); ++i) j[c.schema().label(i)] = c[i];
  return j;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string report_json(const EvaluationReport& r) {
  ordered_json j;
  j["property"] = r.property.name();
  j["labels"] = std::vector<std::string>(r.property.labels().begin(), r.property.labels().end());
  j["kind"] = std::string(to_string(r.kind));
  j["instances"] = r.instances;
  j["dist_o"] = dist_json(r.dist_o);
  j["dist_po"] = dist_json(r.dist_po);
  j["dist_pt"] = dist_json(r.dist_pt);
  j["counts_o"] = counts_json(r.counts_o);
  j["counts_po"] = counts_json(r.counts_po);
  j["counts_pt"] = counts_json(r.counts_pt);
  j["kl_o_po"] = r.kl_o_po;
  j["kl_o_pt"] = r.kl_o_pt;
  j["chi2"] = {{"statistic", r.chi2.statistic}, {"dof", r.chi2.dof}, {"p_value", r.chi2.p_value}};
  ordered_json dev = ordered_json::object();
  for (const auto& d : r.diagnosis.deviations) dev[d.label] = {{"po", d.po}, {"pt", d.pt}};
  j["diagnosis"] = {{"verdict", std::string(to_string(r.diagnosis.verdict))},
                    {"threshold", r.diagnosis.threshold},
                    {"deviations", dev}};
  ordered_json viol = ordered_json::array();
  for (const auto& v : r.violations) viol.push_back({{"id", v.id}, {"reason", v.reason}});
  j["violations"] = viol;
  return j.dump(2) + "\n";
}

std::string plot_tsv(const EvaluationReport& r) {
  std::string out = "label\tdist_o\tdist_po\tdist_pt\n";
  for (std::size_t i = 0; i < r.property.size(); ++i) {
    out += r.property.label(i) + '\t' + format_double(r.dist_o[i]) + '\t' + format_double(r.dist_po[i]) + '\t' +
           format_double(r.dist_pt[i]) + '\n';
  }
  return out;
}

std::string summary_text(const EvaluationReport& r) {
  std::ostringstream os;
  os << "property: " << r.property.name() << "  kind: " << to_string(r.kind) << "  instances: " << r.instances
     << '\n';
  std::size_t width = 7;
  for (const auto& l : r.property.labels()) width = std::max(width, l.size() + 2);
  const auto pad = [width](const std::string& s) { return s + std::string(width - s.size(), ' '); };
  os << pad("label") << "Dist O   Dist PO  Dist PT\n";
  for (std::size_t i = 0; i < r.property.size(); ++i) {
    os << pad(r.property.label(i)) << fixed(r.dist_o[i], 4) << "   " << fixed(r.dist_po[i], 4) << "   "
       << fixed(r.dist_pt[i], 4) << '\n';
  }
  os << "KL(O,PO) = " << fixed(r.kl_o_po, 6) << "   KL(O,PT) = " << fixed(r.kl_o_pt, 6) << '\n';
  os << "chi2(PO,PT) = " << fixed(r.chi2.statistic, 4) << " (dof " << r.chi2.dof << "), p = " << general(r.chi2.p_value)
     << '\n';
  os << "verdict: " << to_string(r.diagnosis.verdict) << " (threshold " << r.diagnosis.threshold << ")\n";
  os << "constraint violations: " << r.violations.size() << '\n';
  return os.str();
}

LabelTable read_label_table(std::istream& in) {
  LabelTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    const auto where = "line " + std::to_string(lineno);
    if (f.size() != 2) throw Error(Errc::MalformedRow, where + ": expected label<TAB>value");
    if (f[0] == "label") continue;  // optional header
    const double v = parse_double(f[1], where);
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(Errc::MalformedRow, where + ": negative or non-finite value");
    if (std::find(t.labels.begin(), t.labels.end(), f[0]) != t.labels.end()) {
      throw Error(Errc::MalformedRow, where + ": label '" + std::string(f[0]) + "' repeated");
    }
    t.labels.emplace_back(f[0]);
    t.values.push_back(v);
    if (v != std::floor(v) || f[1].find_first_of(".eE") != std::string_view::npos) t.integral = false;
  }
  if (t.labels.size() < 2) throw Error(Errc::EmptyInput, "a label table needs at least 2 labels");
  return t;
}

LabelTable load_label_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_label_table(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

namespace {

std::vector<double> aligned_values(const LabelTable& t, const PropertySchema& schema, std::string_view name) {
  if (t.labels.size() != schema.size()) throw Error(Errc::SchemaMismatch, std::string(name) + " has a different label set");
  std::vector<double> out(schema.size());
  for (std::size_t i = 0; i < t.labels.size(); ++i) {
    const auto idx = schema.index_of(t.labels[i]);
    if (!idx) throw Error(Errc::SchemaMismatch, std::string(name) + " has unknown label '" + t.labels[i] + "'");
    out[*idx] = t.values[i];
  }
  return out;
}

LabelDistribution to_distribution(const std::vector<double>& v, const PropertySchema& schema, bool integral,
                                  std::string_view name) {
  double sum = 0.0;
  for (const double x : v) sum += x;
  if (!(sum > 0.0)) throw Error(Errc::EmptyInput, std::string(name) + " sums to zero");
  if (!integral && std::abs(sum - 1.0) > 1e-6) {
    throw Error(Errc::InvalidArgument, std::string(name) + " probabilities sum to " + format_double(sum));
  }
  std::vector<double> p;
  p.reserve(v.size());
  for (const double x : v) p.push_back(x / sum);
  return LabelDistribution(schema, std::move(p));
}

LabelCounts to_counts(const std::vector<double>& v, const PropertySchema& schema) {
  std::vector<std::uint64_t> c;
  c.reserve(v.size());
  for (const double x : v) c.push_back(static_cast<std::uint64_t>(x));
  return LabelCounts(schema, std::move(c));
}

}  // namespace

ScoreResult score_tables(const LabelTable& o, const LabelTable& pt, const std::optional<LabelTable>& po,
                         double epsilon) {
  const PropertySchema schema("property", o.labels);
  const auto vo = aligned_values(o, schema, "dist-o");
  const auto vpt = aligned_values(pt, schema, "dist-pt");

  ScoreResult r{to_distribution(vo, schema, o.integral, "dist-o"), std::nullopt,
                to_distribution(vpt, schema, pt.integral, "dist-pt"), std::nullopt, 0.0, std::nullopt, {}};
  r.kl_o_pt = kl_divergence(r.dist_o, r.dist_pt, epsilon);

  std::optional<std::vector<double>> vpo;
  if (po) {
    vpo = aligned_values(*po, schema, "dist-po");
    r.dist_po = to_distribution(*vpo, schema, po->integral, "dist-po");
    r.kl_o_po = kl_divergence(r.dist_o, *r.dist_po, epsilon);
  }

  const LabelTable& first = po ? *po : o;
  const std::vector<double>& first_values = po ? *vpo : vo;
  const std::string pair = po ? "PO,PT" : "O,PT";
  if (first.integral && pt.integral) {
    r.chi2 = homogeneity_test(to_counts(first_values, schema), to_counts(vpt, schema));
    r.chi2_note = pair;
  } else {
    r.chi2_note = pair + ": n/a (needs count tables, got probabilities)";
  }
  return r;
}

std::string score_text(const ScoreResult& r) {
  std::ostringstream os;
  const auto& schema = r.dist_o.schema();
  os << "label\tdist_o" << (r.dist_po ? "\tdist_po" : "") << "\tdist_pt\n";
  for (std::size_t i = 0; i < schema.size(); ++i) {
    os << schema.label(i) << '\t' << fixed(r.dist_o[i], 4);
    if (r.dist_po) os << '\t' << fixed((*r.dist_po)[i], 4);
    os << '\t' << fixed(r.dist_pt[i], 4) << '\n';
  }
  if (r.kl_o_po) os << "kl_o_po\t" << fixed(*r.kl_o_po, 6) << '\n';
  os << "kl_o_pt\t" << fixed(r.kl_o_pt, 6) << '\n';
  if (r.chi2) {
    os << "chi2(" << r.chi2_note << ")\tstatistic " << fixed(r.chi2->statistic, 4) << "\tdof " << r.chi2->dof
       << "\tp " << general(r.chi2->p_value) << '\n';
  } else {
    os << "chi2(" << r.chi2_note << ")\n";
  }
  return os.str();
}

}  // namespace lipeval
