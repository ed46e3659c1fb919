#pragma once

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "liftfinsler/flag_curvature.hpp"

namespace liftfinsler {

/// Bracket entry as written in instance files: [e_i, e_j] has component c on e_k, 1-based.
struct InstanceBracket {
  int i = 0, j = 0, k = 0;
  double c = 0.0;
  bool operator==(const InstanceBracket&) const = default;
};

struct PhiSpec {
  std::string kind;  // randers | kropina | matsumoto | riemannian | custom
  std::optional<PhiPolynomial> custom;
  std::optional<double> b0;
  bool operator==(const PhiSpec& o) const {
    auto same_poly = [](const std::optional<PhiPolynomial>& a, const std::optional<PhiPolynomial>& b) {
      if (a.has_value() != b.has_value()) return false;
      return !a || (a->phi == b->phi && a->dphi == b->dphi && a->d2phi == b->d2phi);
    };
    return kind == o.kind && same_poly(custom, o.custom) && b0 == o.b0;
  }
};

struct PlaneSpec {
  Lift pole_lift = Lift::Complete;
  std::vector<double> pole;
  Lift second_lift = Lift::Complete;
  std::vector<double> second;
  bool operator==(const PlaneSpec&) const = default;
};

struct ToleranceOverrides {
  std::optional<double> alg, pd, rank, plane, classification, oracle;
  bool operator==(const ToleranceOverrides&) const = default;

  void apply_to(Tolerances& t) const {
    if (alg) t.alg = *alg;
    if (pd) t.pd = *pd;
    if (rank) t.rank = *rank;
    if (plane) t.plane = *plane;
    if (classification) t.classification = *classification;
    if (oracle) t.oracle = *oracle;
  }
};

struct InstanceFile {
  std::string name;
  int dim = 0;
  std::vector<InstanceBracket> brackets;
  std::vector<std::vector<double>> metric;
  std::vector<double> drift;
  PhiSpec phi;
  std::vector<PlaneSpec> planes;
  std::optional<std::uint64_t> seed;
  ToleranceOverrides tolerances;

  bool operator==(const InstanceFile&) const = default;

  LieAlgebra algebra() const {
    std::vector<BracketEntry> e;
    e.reserve(brackets.size());
    for (const auto& b : brackets) e.push_back({b.i - 1, b.j - 1, b.k - 1, b.c});
    return LieAlgebra::from_brackets(dim, e);
  }

  Eigen::MatrixXd metric_matrix() const {
    Eigen::MatrixXd g(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) g(r, c) = metric[r][c];
    return g;
  }

  AlgVector drift_vector() const { return Eigen::Map<const AlgVector>(drift.data(), static_cast<Eigen::Index>(drift.size())); }

  PhiFamily phi_family() const {
    if (phi.kind == "randers") return PhiFamily::randers();
    if (phi.kind == "kropina") return PhiFamily::kropina();
    if (phi.kind == "matsumoto") return PhiFamily::matsumoto();
    if (phi.kind == "riemannian") return PhiFamily::riemannian();
    return PhiFamily::polynomial(*phi.custom, phi.b0.value_or(std::numeric_limits<double>::infinity()));
  }

  /// Requires a validated instance.
  AlphaBetaStructure structure(const Tolerances& tol = {}) const {
    return AlphaBetaStructure(MetricLieAlgebra(algebra(), MetricTensor(metric_matrix(), tol.pd)), drift_vector(), phi_family());
  }
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t p = 0; p < byte && p < text.size(); ++p) {
    if (text[p] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

class SchemaReader {
 public:
  using json = nlohmann::json;

  static void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw SchemaError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw SchemaError(where + ": unknown field '" + key + "'");
    }
  }

  static const json& need(const json& obj, const std::string& where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(where + ": missing field '" + key + "'");
    return *it;
  }

  static double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw SchemaError(where + ": expected a number");
    return v.get<double>();
  }

  static int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw SchemaError(where + ": expected an integer");
    return v.get<int>();
  }

  static std::string string(const json& v, const std::string& where) {
    if (!v.is_string()) throw SchemaError(where + ": expected a string");
    return v.get<std::string>();
  }

  static std::vector<double> numbers(const json& v, const std::string& where, std::optional<std::size_t> len = std::nullopt) {
    if (!v.is_array()) throw SchemaError(where + ": expected an array of numbers");
    if (len && v.size() != *len) {
      throw SchemaError(where + ": expected " + std::to_string(*len) + " entries, got " + std::to_string(v.size()));
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
  }

  static Lift lift(const json& v, const std::string& where) {
    const std::string s = string(v, where);
    if (s == "c") return Lift::Complete;
    if (s == "v") return Lift::Vertical;
    throw SchemaError(where + ": expected \"c\" or \"v\"");
  }
};

}  // namespace detail

/// Parses the JSON instance format without mathematical validation.
inline InstanceFile parse_instance_unchecked(const std::string& text) {
  using json = nlohmann::json;
  using R = detail::SchemaReader;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("instance: malformed JSON at " + detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }

  R::only_keys(doc, "instance", {"name", "dim", "brackets", "metric", "drift", "phi", "planes", "seed", "tolerances"});
  InstanceFile f;
  f.name = R::string(R::need(doc, "instance", "name"), "name");
  f.dim = R::integer(R::need(doc, "instance", "dim"), "dim");
  if (f.dim < 1) throw SchemaError("dim: must be positive");
  const auto n = static_cast<std::size_t>(f.dim);

  const json& brackets = R::need(doc, "instance", "brackets");
  if (!brackets.is_array()) throw SchemaError("brackets: expected an array");
  for (std::size_t b = 0; b < brackets.size(); ++b) {
    const std::string where = "brackets[" + std::to_string(b) + "]";
    R::only_keys(brackets[b], where, {"i", "j", "k", "c"});
    InstanceBracket e;
    e.i = R::integer(R::need(brackets[b], where, "i"), where + ".i");
    e.j = R::integer(R::need(brackets[b], where, "j"), where + ".j");
    e.k = R::integer(R::need(brackets[b], where, "k"), where + ".k");
    e.c = R::number(R::need(brackets[b], where, "c"), where + ".c");
    for (int idx : {e.i, e.j, e.k}) {
      if (idx < 1 || idx > f.dim) throw SchemaError(where + ": index " + std::to_string(idx) + " outside 1.." + std::to_string(f.dim));
    }
    if (e.i == e.j) throw SchemaError(where + ": i and j must differ");
    f.brackets.push_back(e);
  }

  const json& metric = R::need(doc, "instance", "metric");
  if (!metric.is_array() || metric.size() != n) throw SchemaError("metric: expected " + std::to_string(n) + " rows");
  for (std::size_t r = 0; r < n; ++r) f.metric.push_back(R::numbers(metric[r], "metric[" + std::to_string(r) + "]", n));

  f.drift = R::numbers(R::need(doc, "instance", "drift"), "drift", n);

  const json& phi = R::need(doc, "instance", "phi");
  R::only_keys(phi, "phi", {"kind", "phi", "dphi", "d2phi", "b0"});
  f.phi.kind = R::string(R::need(phi, "phi", "kind"), "phi.kind");
  if (f.phi.kind == "custom") {
    PhiPolynomial p;
    p.phi = R::numbers(R::need(phi, "phi", "phi"), "phi.phi");
    p.dphi = R::numbers(R::need(phi, "phi", "dphi"), "phi.dphi");
    p.d2phi = R::numbers(R::need(phi, "phi", "d2phi"), "phi.d2phi");
    if (p.phi.empty()) throw SchemaError("phi.phi: needs at least one coefficient");
    f.phi.custom = std::move(p);
    if (phi.contains("b0")) f.phi.b0 = R::number(phi["b0"], "phi.b0");
  } else if (f.phi.kind == "randers" || f.phi.kind == "kropina" || f.phi.kind == "matsumoto" || f.phi.kind == "riemannian") {
    for (const char* k : {"phi", "dphi", "d2phi", "b0"}) {
      if (phi.contains(k)) throw SchemaError(std::string("phi.") + k + ": only allowed for kind \"custom\"");
    }
  } else {
    throw SchemaError("phi.kind: unknown kind '" + f.phi.kind + "'");
  }

  if (doc.contains("planes")) {
    const json& planes = doc["planes"];
    if (!planes.is_array()) throw SchemaError("planes: expected an array");
    for (std::size_t p = 0; p < planes.size(); ++p) {
      const std::string where = "planes[" + std::to_string(p) + "]";
      R::only_keys(planes[p], where, {"pole_lift", "pole", "second_lift", "second"});
      PlaneSpec s;
      s.pole_lift = R::lift(R::need(planes[p], where, "pole_lift"), where + ".pole_lift");
      s.pole = R::numbers(R::need(planes[p], where, "pole"), where + ".pole", n);
      s.second_lift = R::lift(R::need(planes[p], where, "second_lift"), where + ".second_lift");
      s.second = R::numbers(R::need(planes[p], where, "second"), where + ".second", n);
      f.planes.push_back(std::move(s));
    }
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw SchemaError("seed: expected a non-negative integer");
    f.seed = doc["seed"].get<std::uint64_t>();
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    R::only_keys(t, "tolerances", {"alg", "pd", "rank", "plane", "classification", "oracle"});
    auto opt = [&](const char* k, std::optional<double>& dst) {
      if (!t.contains(k)) return;
      dst = R::number(t[k], std::string("tolerances.") + k);
      if (!(*dst > 0.0)) throw SchemaError(std::string("tolerances.") + k + ": must be positive");
    };
    opt("alg", f.tolerances.alg);
    opt("pd", f.tolerances.pd);
    opt("rank", f.tolerances.rank);
    opt("plane", f.tolerances.plane);
    opt("classification", f.tolerances.classification);
    opt("oracle", f.tolerances.oracle);
  }
  return f;
}

/// Mathematical checks on a parsed instance: Jacobi, positive-definiteness,
/// norm bound, validity inequality, custom derivative consistency, plane rank.
inline ValidationReport validate_instance(const InstanceFile& f, const Tolerances& tol) {
  ValidationReport r;
  r.append(validate(f.algebra(), tol.alg));

  const Eigen::MatrixXd g = f.metric_matrix();
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  r.checks.push_back({"metric_symmetry", asym, 1e-12 * scale, asym <= 1e-12 * scale, "max |g_ij - g_ji|"});
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (g + g.transpose())).eigenvalues().minCoeff();
  r.checks.push_back({"positive_definiteness", min_eig, tol.pd, min_eig > tol.pd, "smallest metric eigenvalue"});
  if (!r.passed()) return r;

  const AlphaBetaStructure st = f.structure(tol);
  if (f.phi.custom) r.append(st.phi().check_derivatives());
  r.append(validity_check(st));

  const MetricLieAlgebra& m = st.space();
  for (std::size_t p = 0; p < f.planes.size(); ++p) {
    const AlgVector y = Eigen::Map<const AlgVector>(f.planes[p].pole.data(), f.dim);
    const AlgVector v = Eigen::Map<const AlgVector>(f.planes[p].second.data(), f.dim);
    const double gram = m.inner(y, y) * m.inner(v, v) - std::pow(m.inner(y, v), 2);
    const double rel = gram / std::max(1e-300, m.inner(y, y) * m.inner(v, v));
    r.checks.push_back({"plane_" + std::to_string(p) + "_rank", rel, tol.plane, rel > tol.plane,
                        "normalized Gram determinant of the base plane"});
  }
  return r;
}

/// Default tolerances overridden by the file, then LIFTFINSLER_TOL_* env vars.
/// Command-line overrides are applied on top by the caller.
inline Tolerances resolve_tolerances(const InstanceFile& f) {
  Tolerances t;
  f.tolerances.apply_to(t);
  auto env = [](const char* name, double& dst) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return;
    char* end = nullptr;
    const double d = std::strtod(v, &end);
    if (end == v || *end != '\0' || !(d > 0.0)) throw ParseError(std::string(name) + ": not a positive number: '" + v + "'");
    dst = d;
  };
  env("LIFTFINSLER_TOL_ALG", t.alg);
  env("LIFTFINSLER_TOL_PD", t.pd);
  env("LIFTFINSLER_TOL_RANK", t.rank);
  env("LIFTFINSLER_TOL_PLANE", t.plane);
  env("LIFTFINSLER_TOL_CLASS", t.classification);
  env("LIFTFINSLER_TOL_ORACLE", t.oracle);
  return t;
}

/// Parse plus validation; throws ValidationError on the first failed check.
inline InstanceFile parse_instance(const std::string& text, std::optional<Tolerances> tol = std::nullopt) {
  InstanceFile f = parse_instance_unchecked(text);
  const ValidationReport r = validate_instance(f, tol.value_or(resolve_tolerances(f)));
  if (const ValidationCheck* bad = r.first_failure()) {
    throw ValidationError(bad->name, bad->value, f.name + ": " + bad->detail);
  }
  return f;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json instance_to_json(const InstanceFile& f) {
  using json = nlohmann::json;
  json doc;
  doc["name"] = f.name;
  doc["dim"] = f.dim;
  doc["brackets"] = json::array();
  for (const auto& b : f.brackets) doc["brackets"].push_back({{"i", b.i}, {"j", b.j}, {"k", b.k}, {"c", b.c}});
  doc["metric"] = f.metric;
  doc["drift"] = f.drift;
  json phi = {{"kind", f.phi.kind}};
  if (f.phi.custom) {
    phi["phi"] = f.phi.custom->phi;
    phi["dphi"] = f.phi.custom->dphi;
    phi["d2phi"] = f.phi.custom->d2phi;
  }
  if (f.phi.b0) phi["b0"] = *f.phi.b0;
  doc["phi"] = phi;
  if (!f.planes.empty()) {
    doc["planes"] = json::array();
    for (const auto& p : f.planes) {
      doc["planes"].push_back({{"pole_lift", to_string(p.pole_lift)}, {"pole", p.pole}, {"second_lift", to_string(p.second_lift)},
                               {"second", p.second}});
    }
  }
  if (f.seed) doc["seed"] = *f.seed;
  json t = json::object();
  const auto& o = f.tolerances;
  if (o.alg) t["alg"] = *o.alg;
  if (o.pd) t["pd"] = *o.pd;
  if (o.rank) t["rank"] = *o.rank;
  if (o.plane) t["plane"] = *o.plane;
  if (o.classification) t["classification"] = *o.classification;
  if (o.oracle) t["oracle"] = *o.oracle;
  if (!t.empty()) doc["tolerances"] = t;
  return doc;
}

}  // namespace liftfinsler
