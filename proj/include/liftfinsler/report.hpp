#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "liftfinsler/instance.hpp"

namespace liftfinsler {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitInconsistency = 2, kExitParse = 3 };

struct ReportOptions {
  int planes_per_case = 20;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  FiniteDifference fd;
  double specialization_tolerance = 1e-10;
};

/// Seed: explicit > instance file > 0. Tolerances: flags > env > file > defaults.
inline ReportOptions make_options(const InstanceFile& inst, std::optional<int> planes, std::optional<std::uint64_t> seed,
                                  std::optional<double> tol_class) {
  ReportOptions o;
  if (planes) o.planes_per_case = *planes;
  o.seed = seed ? *seed : inst.seed.value_or(0);
  o.tolerances = resolve_tolerances(inst);
  if (tol_class) o.tolerances.classification = *tol_class;
  return o;
}

struct CurvatureRow {
  std::string metric;  // "Fc" | "Fv"
  std::string case_tag;
  int plane = 0;
  std::vector<double> pole;
  std::vector<double> second;
  bool defined = false;
  std::string method;
  std::optional<double> theorem_value;
  std::optional<double> oracle_value;
  std::optional<double> residual;
  std::optional<double> tolerance;
  std::optional<double> printed_value;
  std::optional<double> printed_residual;
  std::optional<double> specialization_value;
  std::optional<double> specialization_residual;
  std::optional<double> specialization_tolerance;
  bool passed = true;
  std::string note;

  bool operator==(const CurvatureRow&) const = default;
};

struct ClassificationRecord {
  std::string metric;  // "F" | "Fc" | "Fv"
  Classification result;
  bool operator==(const ClassificationRecord&) const = default;
};

struct Provenance {
  std::uint64_t seed = 0;
  int planes_per_case = 0;
  Tolerances tolerances;
  std::string version = kVersion;
  bool operator==(const Provenance&) const = default;
};

struct Report {
  int schema_version = kReportSchemaVersion;
  std::string instance;
  std::string phi;
  ValidationReport validation;
  std::vector<ClassificationRecord> classifications;
  std::vector<CurvatureRow> rows;
  std::vector<std::string> notes;
  Provenance provenance;
  int exit_code = kExitOk;

  bool operator==(const Report&) const = default;
};

namespace detail {

inline std::vector<double> to_std(const AlgVector& v) { return {v.data(), v.data() + v.size()}; }

inline void mark(Report& r, int code) { r.exit_code = std::max(r.exit_code, code); }

inline CurvatureRow evaluate_row(const FlagContext& ctx, Lift which, const FlagPlane& plane, int index,
                                 const ReportOptions& opt, Report& report) {
  CurvatureRow row;
  row.metric = which == Lift::Complete ? "Fc" : "Fv";
  row.case_tag = to_string(plane.tag());
  row.plane = index;
  row.pole = to_std(plane.base_pole());
  row.second = to_std(plane.base_second());

  const Classification& cls = ctx.classification(which);
  const PhiKind kind = ctx.structure().phi().kind();
  try {
    if (cls.berwald) {
      const CurvatureResult th = which == Lift::Complete ? kc_berwald(ctx, plane) : kv_berwald(ctx, plane);
      row.method = to_string(CurvatureMethod::TheoremFormula);
      if (!th.defined()) {
        row.note = th.undefined_reason;
      } else {
        row.defined = true;
        row.theorem_value = th.value;
        const CurvatureResult orc = flag_oracle_berwald(ctx, which, plane, opt.fd);
        row.oracle_value = orc.value;
        row.residual = std::abs(*orc.value - *th.value);
        row.tolerance = opt.tolerances.oracle;
        if (*row.residual > *row.tolerance) {
          row.passed = false;
          row.note = "theorem formula disagrees with the oracle";
          mark(report, kExitInconsistency);
        }
      }
      if (kind == PhiKind::Matsumoto || kind == PhiKind::Kropina) {
        const CurvatureResult sp = example_specializations(ctx, which, plane);
        row.specialization_tolerance = opt.specialization_tolerance;
        if (sp.defined() != th.defined()) {
          row.passed = false;
          row.note = "closed-form specialization and generic formula disagree on definedness";
          mark(report, kExitInconsistency);
        } else if (sp.defined()) {
          row.specialization_value = sp.value;
          row.specialization_residual = std::abs(*sp.value - *th.value);
          if (*row.specialization_residual > opt.specialization_tolerance * std::max(1.0, std::abs(*th.value))) {
            row.passed = false;
            row.note = "closed-form specialization disagrees with the generic formula";
            mark(report, kExitInconsistency);
          }
        }
      }
    } else {
      const CurvatureResult dh = which == Lift::Complete ? kc_randers_douglas(ctx, plane) : kv_randers_douglas(ctx, plane);
      row.method = to_string(CurvatureMethod::RandersFormula);
      row.defined = dh.defined();
      row.theorem_value = dh.value;
      row.note = dh.undefined_reason;
      if (dh.defined() && dh.printed_value) {
        row.printed_value = dh.printed_value;
        row.printed_residual = std::abs(*dh.printed_value - *dh.value);
      }
    }
  } catch (const InternalInconsistency& e) {
    row.defined = false;
    row.theorem_value.reset();
    row.passed = false;
    row.note = e.what();
    mark(report, kExitInconsistency);
  } catch (const Error& e) {
    row.defined = false;
    row.theorem_value.reset();
    row.note = e.what();
  }
  return row;
}

inline int case_rank(const std::string& tag) {
  for (int i = 0; i < 4; ++i)
    if (tag == to_string(kAllCaseTags[i])) return i;
  return 4;
}

}  // namespace detail

/// Validation, classification of F, F^c, F^v and flag-curvature rows for
/// every Douglas-type lift. Errors on individual rows are recorded in the row.
inline Report run_analysis(const InstanceFile& inst, const ReportOptions& opt) {
  Report report;
  report.instance = inst.name;
  report.phi = inst.phi.kind;
  report.provenance.seed = opt.seed;
  report.provenance.planes_per_case = inst.planes.empty() ? opt.planes_per_case : 0;
  report.provenance.tolerances = opt.tolerances;

  report.validation = validate_instance(inst, opt.tolerances);
  if (!report.validation.passed()) {
    report.notes.push_back("validation failed; no classification or curvature computed");
    report.exit_code = kExitValidation;
    return report;
  }

  std::optional<FlagContext> ctx;
  try {
    ctx.emplace(inst.structure(opt.tolerances), opt.tolerances);
  } catch (const InternalInconsistency& e) {
    report.notes.push_back(e.what());
    report.exit_code = kExitInconsistency;
    return report;
  }
  report.classifications = {{"F", ctx->base_classification()},
                            {"Fc", ctx->classification(Lift::Complete)},
                            {"Fv", ctx->classification(Lift::Vertical)}};

  const MetricLieAlgebra& m = ctx->base();
  const AlgVector& x = ctx->structure().drift();
  const bool kropina = ctx->structure().phi().kind() == PhiKind::Kropina;
  std::vector<std::pair<FlagPlane, int>> planes;
  if (!inst.planes.empty()) {
    for (std::size_t p = 0; p < inst.planes.size(); ++p) {
      const PlaneSpec& s = inst.planes[p];
      const AlgVector y = Eigen::Map<const AlgVector>(s.pole.data(), inst.dim);
      const AlgVector v = Eigen::Map<const AlgVector>(s.second.data(), inst.dim);
      planes.emplace_back(FlagPlane::orthonormalized(m, y, v, case_tag(s.pole_lift, s.second_lift), opt.tolerances.plane),
                          static_cast<int>(p));
    }
  } else {
    std::mt19937_64 rng(opt.seed);
    for (CaseTag t : kAllCaseTags)
      for (int k = 0; k < opt.planes_per_case; ++k) {
        FlagPlane p = random_orthonormal_plane(m, rng, t);
        // Kropina needs beta > 0 at the pole.
        if (kropina && m.inner(x, p.base_pole()) < 0.0) p = FlagPlane::make(m, -p.base_pole(), p.base_second(), t, 1e-9);
        planes.emplace_back(std::move(p), k);
      }
    if (kropina) report.notes.push_back("Kropina: random poles oriented so that g(X,Y) >= 0");
  }

  for (Lift which : {Lift::Complete, Lift::Vertical}) {
    const char* label = which == Lift::Complete ? "F^c" : "F^v";
    if (!ctx->classification(which).douglas) {
      report.notes.push_back(std::string(label) + " is not of Douglas type; flag curvature is not evaluated");
      continue;
    }
    if (!ctx->classification(which).berwald) {
      report.notes.push_back(std::string(label) + " is Douglas but not Berwald: tangent-algebra Randers formula, printed case formula logged");
    }
    std::vector<CurvatureRow> rows;
    for (const auto& [plane, index] : planes) rows.push_back(detail::evaluate_row(*ctx, which, plane, index, opt, report));
    std::stable_sort(rows.begin(), rows.end(), [](const CurvatureRow& a, const CurvatureRow& b) {
      return std::make_pair(detail::case_rank(a.case_tag), a.plane) < std::make_pair(detail::case_rank(b.case_tag), b.plane);
    });
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}


namespace detail {

using json = nlohmann::json;

/// Non-finite numbers are written as strings; JSON has no inf.
inline json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double num_from(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw SchemaError(where + ": expected a number");
}

inline void put_opt(json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = num(*v);
}

inline std::optional<double> get_opt(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  const json& v = j.at(key);
  if (v.is_string() && v.get<std::string>() == "undefined") return std::nullopt;
  return num_from(v, key);
}

inline json tolerances_json(const Tolerances& t) {
  return {{"alg", t.alg}, {"pd", t.pd}, {"rank", t.rank}, {"plane", t.plane}, {"classification", t.classification}, {"oracle", t.oracle}};
}

inline Tolerances tolerances_from(const json& j) {
  Tolerances t;
  t.alg = j.at("alg").get<double>();
  t.pd = j.at("pd").get<double>();
  t.rank = j.at("rank").get<double>();
  t.plane = j.at("plane").get<double>();
  t.classification = j.at("classification").get<double>();
  t.oracle = j.at("oracle").get<double>();
  return t;
}

inline DouglasReason reason_from(const std::string& s) {
  if (s == "berwald") return DouglasReason::Berwald;
  if (s == "randers_douglas") return DouglasReason::RandersDouglas;
  if (s == "not_douglas") return DouglasReason::NotDouglas;
  throw SchemaError("classification.reason: unknown value '" + s + "'");
}

}  // namespace detail

inline nlohmann::json to_json(const Report& r) {
  using detail::json;
  using detail::num;
  json j;
  j["schema_version"] = r.schema_version;
  j["instance"] = r.instance;
  j["phi"] = r.phi;

  json checks = json::array();
  for (const auto& c : r.validation.checks) {
    checks.push_back({{"name", c.name}, {"value", num(c.value)}, {"tolerance", num(c.tolerance)}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["validation"] = {{"passed", r.validation.passed()}, {"checks", checks}};

  json cls = json::array();
  for (const auto& c : r.classifications) {
    json w = json::array();
    for (const auto& x : c.result.witnesses) w.push_back({{"criterion", x.criterion}, {"label", x.label}, {"residual", num(x.residual)}});
    cls.push_back({{"metric", c.metric},
                   {"berwald", c.result.berwald},
                   {"douglas", c.result.douglas},
                   {"reason", to_string(c.result.reason)},
                   {"berwald_residual", num(c.result.berwald_residual)},
                   {"douglas_residual", num(c.result.douglas_residual)},
                   {"tolerance", num(c.result.tolerance)},
                   {"witnesses", w}});
  }
  j["classifications"] = cls;

  json rows = json::array();
  for (const auto& row : r.rows) {
    json o = {{"metric", row.metric}, {"case_tag", row.case_tag}, {"plane", row.plane}, {"pole", row.pole},
              {"second", row.second}, {"defined", row.defined},   {"method", row.method}};
    o["theorem_value"] = row.theorem_value ? num(*row.theorem_value) : json("undefined");
    detail::put_opt(o, "oracle_value", row.oracle_value);
    detail::put_opt(o, "residual", row.residual);
    detail::put_opt(o, "tolerance", row.tolerance);
    detail::put_opt(o, "printed_value", row.printed_value);
    detail::put_opt(o, "printed_residual", row.printed_residual);
    detail::put_opt(o, "specialization_value", row.specialization_value);
    detail::put_opt(o, "specialization_residual", row.specialization_residual);
    detail::put_opt(o, "specialization_tolerance", row.specialization_tolerance);
    o["passed"] = row.passed;
    if (!row.note.empty()) o["note"] = row.note;
    rows.push_back(std::move(o));
  }
  j["rows"] = rows;
  j["notes"] = r.notes;
  j["provenance"] = {{"seed", r.provenance.seed},
                     {"planes_per_case", r.provenance.planes_per_case},
                     {"tolerances", detail::tolerances_json(r.provenance.tolerances)},
                     {"version", r.provenance.version}};
  j["exit_code"] = r.exit_code;
  return j;
}

inline Report report_from_json(const nlohmann::json& j) {
  using detail::num_from;
  Report r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw SchemaError("report: unsupported schema_version " + std::to_string(r.schema_version));
    }
    r.instance = j.at("instance").get<std::string>();
    r.phi = j.at("phi").get<std::string>();
    for (const auto& c : j.at("validation").at("checks")) {
      r.validation.checks.push_back({c.at("name").get<std::string>(), num_from(c.at("value"), "value"),
                                     num_from(c.at("tolerance"), "tolerance"), c.at("passed").get<bool>(),
                                     c.at("detail").get<std::string>()});
    }
    for (const auto& c : j.at("classifications")) {
      ClassificationRecord rec;
      rec.metric = c.at("metric").get<std::string>();
      rec.result.berwald = c.at("berwald").get<bool>();
      rec.result.douglas = c.at("douglas").get<bool>();
      rec.result.reason = detail::reason_from(c.at("reason").get<std::string>());
      rec.result.berwald_residual = num_from(c.at("berwald_residual"), "berwald_residual");
      rec.result.douglas_residual = num_from(c.at("douglas_residual"), "douglas_residual");
      rec.result.tolerance = num_from(c.at("tolerance"), "tolerance");
      for (const auto& w : c.at("witnesses")) {
        rec.result.witnesses.push_back(
            {w.at("criterion").get<std::string>(), w.at("label").get<std::string>(), num_from(w.at("residual"), "residual")});
      }
      r.classifications.push_back(std::move(rec));
    }
    for (const auto& o : j.at("rows")) {
      CurvatureRow row;
      row.metric = o.at("metric").get<std::string>();
      row.case_tag = o.at("case_tag").get<std::string>();
      row.plane = o.at("plane").get<int>();
      row.pole = o.at("pole").get<std::vector<double>>();
      row.second = o.at("second").get<std::vector<double>>();
      row.defined = o.at("defined").get<bool>();
      row.method = o.at("method").get<std::string>();
      row.theorem_value = detail::get_opt(o, "theorem_value");
      row.oracle_value = detail::get_opt(o, "oracle_value");
      row.residual = detail::get_opt(o, "residual");
      row.tolerance = detail::get_opt(o, "tolerance");
      row.printed_value = detail::get_opt(o, "printed_value");
      row.printed_residual = detail::get_opt(o, "printed_residual");
      row.specialization_value = detail::get_opt(o, "specialization_value");
      row.specialization_residual = detail::get_opt(o, "specialization_residual");
      row.specialization_tolerance = detail::get_opt(o, "specialization_tolerance");
      row.passed = o.at("passed").get<bool>();
      row.note = o.value("note", std::string());
      r.rows.push_back(std::move(row));
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    const auto& p = j.at("provenance");
    r.provenance.seed = p.at("seed").get<std::uint64_t>();
    r.provenance.planes_per_case = p.at("planes_per_case").get<int>();
    r.provenance.tolerances = detail::tolerances_from(p.at("tolerances"));
    r.provenance.version = p.at("version").get<std::string>();
    r.exit_code = j.at("exit_code").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("report: ") + e.what());
  }
  return r;
}

inline Report report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("report: malformed JSON at " + detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  return report_from_json(j);
}


namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

/// Fixed six-decimal rendering; values that round to zero print as 0.000000.
inline std::string fixed6(double v) {
  if (std::abs(v) < 5e-7) v = 0.0;
  return fmt("%.6f", v);
}

inline std::string sci(const std::optional<double>& v) { return v ? fmt("%.2e", *v) : "-"; }

inline std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace detail

inline std::string emit_text(const Report& r) {
  using detail::pad;
  std::ostringstream out;
  out << "instance: " << r.instance << "  (phi = " << r.phi << ")\n";
  out << "validation: " << (r.validation.passed() ? "passed" : "FAILED") << "\n";
  for (const auto& c : r.validation.checks) {
    out << "  " << pad(c.name, 26) << pad(detail::fmt("%.3e", c.value), 12) << pad(detail::fmt("%.1e", c.tolerance), 10)
        << (c.passed ? "ok" : "FAIL") << "\n";
  }
  if (!r.classifications.empty()) {
    out << "classification:\n";
    out << "  " << pad("metric", 8) << pad("berwald", 9) << pad("douglas", 9) << pad("reason", 17) << pad("berwald_res", 13)
        << "douglas_res\n";
    for (const auto& c : r.classifications) {
      out << "  " << pad(c.metric, 8) << pad(c.result.berwald ? "yes" : "no", 9) << pad(c.result.douglas ? "yes" : "no", 9)
          << pad(to_string(c.result.reason), 17) << pad(detail::fmt("%.2e", c.result.berwald_residual), 13)
          << detail::fmt("%.2e", c.result.douglas_residual) << "\n";
      for (const auto& w : c.result.witnesses) {
        out << "      witness " << w.criterion << ": " << w.label << " = " << detail::fmt("%.3e", w.residual) << "\n";
      }
    }
  }
  if (!r.rows.empty()) {
    out << "curvature:\n";
    out << "  " << pad("metric", 8) << pad("case", 6) << pad("plane", 7) << pad("value", 18) << pad("method", 17) << pad("oracle", 12)
        << pad("residual", 20) << "status\n";
    for (const auto& row : r.rows) {
      const std::string value = row.theorem_value ? "K = " + detail::fixed6(*row.theorem_value) : "K = undefined";
      const std::string check = row.residual ? detail::sci(row.residual) : row.printed_residual ? "printed " + detail::sci(row.printed_residual) : "-";
      out << "  " << pad(row.metric, 8) << pad(row.case_tag, 6) << pad(std::to_string(row.plane), 7) << pad(value, 18)
          << pad(row.method, 17) << pad(row.oracle_value ? detail::fixed6(*row.oracle_value) : "-", 12) << pad(check, 20)
          << (row.passed ? "ok" : "FAIL");
      if (!row.note.empty() && (!row.defined || !row.passed)) out << "  (" << row.note << ")";
      out << "\n";
    }
  }
  for (const auto& n : r.notes) out << "note: " << n << "\n";
  out << "seed " << r.provenance.seed << ", version " << r.provenance.version << ", exit code " << r.exit_code << "\n";
  return out.str();
}

inline std::string emit_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

}  // namespace liftfinsler
