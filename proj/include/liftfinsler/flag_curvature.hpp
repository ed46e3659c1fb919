#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "liftfinsler/finsler_metrics.hpp"

namespace liftfinsler {

/// Which lifts span the flag: first letter is the pole's lift, second the
/// transverse vector's lift.
enum class CaseTag { cc, cv, vc, vv };

inline constexpr CaseTag kAllCaseTags[] = {CaseTag::cc, CaseTag::cv, CaseTag::vc, CaseTag::vv};

inline const char* to_string(CaseTag t) {
  switch (t) {
    case CaseTag::cc: return "cc";
    case CaseTag::cv: return "cv";
    case CaseTag::vc: return "vc";
    case CaseTag::vv: return "vv";
  }
  return "cc";
}

inline CaseTag case_tag(Lift pole, Lift second) {
  if (pole == Lift::Complete) return second == Lift::Complete ? CaseTag::cc : CaseTag::cv;
  return second == Lift::Complete ? CaseTag::vc : CaseTag::vv;
}

inline Lift pole_lift(CaseTag t) { return (t == CaseTag::cc || t == CaseTag::cv) ? Lift::Complete : Lift::Vertical; }
inline Lift second_lift(CaseTag t) { return (t == CaseTag::cc || t == CaseTag::vc) ? Lift::Complete : Lift::Vertical; }

/// Flag span{pole, second} in the tangent algebra built from a g-orthonormal
/// pair (Y, V) of the base algebra; the pole is the lift of Y.
class FlagPlane {
 public:
  static FlagPlane make(const MetricLieAlgebra& m, AlgVector pole, AlgVector second, CaseTag tag,
                        double tol_plane = Tolerances{}.plane) {
    detail::require_dim(pole, m.dim(), "flag pole");
    detail::require_dim(second, m.dim(), "flag second vector");
    const double e1 = std::abs(m.inner(pole, pole) - 1.0);
    const double e2 = std::abs(m.inner(second, second) - 1.0);
    const double e3 = std::abs(m.inner(pole, second));
    if (std::max({e1, e2, e3}) > tol_plane) {
      throw DegeneratePlaneError("flag vectors must be g-orthonormal (defect " + std::to_string(std::max({e1, e2, e3})) + ")");
    }
    return FlagPlane(std::move(pole), std::move(second), tag);
  }

  /// Gram-Schmidt in g: keeps the plane and the pole ray.
  static FlagPlane orthonormalized(const MetricLieAlgebra& m, const AlgVector& pole, const AlgVector& second, CaseTag tag,
                                   double tol_plane = Tolerances{}.plane) {
    detail::require_dim(pole, m.dim(), "flag pole");
    detail::require_dim(second, m.dim(), "flag second vector");
    const double np = m.metric().norm(pole);
    if (!(np > 0.0)) throw DegeneratePlaneError("flag pole is zero");
    AlgVector y = pole / np;
    AlgVector v = second - m.inner(second, y) * y;
    const double nv = m.metric().norm(v);
    if (!(nv * nv > tol_plane * std::max(1.0, m.inner(second, second)))) {
      throw DegeneratePlaneError("flag vectors are collinear");
    }
    v /= nv;
    return make(m, std::move(y), std::move(v), tag, std::max(tol_plane, 1e-12));
  }

  const AlgVector& base_pole() const noexcept { return pole_; }
  const AlgVector& base_second() const noexcept { return second_; }
  CaseTag tag() const noexcept { return tag_; }
  LiftedVector pole() const { return lift(pole_lift(tag_), pole_); }
  LiftedVector second() const { return lift(second_lift(tag_), second_); }

 private:
  FlagPlane(AlgVector p, AlgVector s, CaseTag t) : pole_(std::move(p)), second_(std::move(s)), tag_(t) {}

  AlgVector pole_;
  AlgVector second_;
  CaseTag tag_;
};

inline FlagPlane random_orthonormal_plane(const MetricLieAlgebra& m, std::mt19937_64& rng, CaseTag tag) {
  if (m.dim() < 2) throw DimensionError("flags need an algebra of dimension >= 2");
  std::normal_distribution<double> normal;
  for (;;) {
    AlgVector a(m.dim());
    AlgVector b(m.dim());
    for (int i = 0; i < m.dim(); ++i) a[i] = normal(rng);
    for (int i = 0; i < m.dim(); ++i) b[i] = normal(rng);
    try {
      return FlagPlane::orthonormalized(m, a, b, tag, 1e-6);
    } catch (const DegeneratePlaneError&) {
      continue;
    }
  }
}

enum class CurvatureMethod { TheoremFormula, Oracle, RandersFormula };

inline const char* to_string(CurvatureMethod m) {
  switch (m) {
    case CurvatureMethod::TheoremFormula: return "theorem_formula";
    case CurvatureMethod::Oracle: return "oracle";
    case CurvatureMethod::RandersFormula: return "randers_formula";
  }
  return "theorem_formula";
}

struct FormulaTerm {
  std::string name;
  double value = 0.0;
};

struct CurvatureResult {
  std::optional<double> value;           // empty: undefined
  CurvatureMethod method = CurvatureMethod::TheoremFormula;
  std::vector<FormulaTerm> terms;
  std::optional<double> printed_value;   // Randers-Douglas: case-by-case printed formula
  std::string undefined_reason;

  bool defined() const noexcept { return value.has_value(); }

  static CurvatureResult undefined(CurvatureMethod m, std::string why) {
    CurvatureResult r;
    r.method = m;
    r.undefined_reason = std::move(why);
    return r;
  }
};

/// Block coefficients of U~(Y^c,Y^c) = sum eta_i e_i^c + delta_i e_i^v and
/// U~(Y^v,Y^v) = sum lambda_j e_j^c + mu_j e_j^v.
struct LiftDecomposition {
  AlgVector eta, delta, lambda, mu;

  LiftedVector complete_square() const { return {eta, delta}; }
  LiftedVector vertical_square() const { return {lambda, mu}; }
};

inline LiftDecomposition lift_decompose(const TangentMetricLieAlgebra& tm, const AlgVector& y) {
  const Eigen::VectorXd ucc = u_map(tm.tangent, lift_complete(y).stacked(), lift_complete(y).stacked());
  const Eigen::VectorXd uvv = u_map(tm.tangent, lift_vertical(y).stacked(), lift_vertical(y).stacked());
  const auto a = LiftedVector::from_stacked(ucc);
  const auto b = LiftedVector::from_stacked(uvv);
  return {a.complete_part, a.vertical_part, b.complete_part, b.vertical_part};
}

inline LiftDecomposition lift_decompose(const MetricLieAlgebra& m, const AlgVector& y) {
  return lift_decompose(tangent_algebra(m), y);
}

/// Cached geometry of one (alpha,beta)-structure: base and tangent Levi-Civita
/// tables plus the three classifications.
class FlagContext {
 public:
  explicit FlagContext(AlphaBetaStructure s, Tolerances tol = {})
      : s_(std::move(s)),
        tol_(tol),
        base_nabla_(levi_civita(s_.space())),
        tangent_(tangent_algebra(s_.space())),
        tangent_nabla_(levi_civita(tangent_.tangent)),
        base_class_(classify_base(s_, tol_.classification)),
        fc_class_(classify_fc(s_, tol_.classification)),
        fv_class_(classify_fv(s_, tol_.classification)) {}

  const AlphaBetaStructure& structure() const noexcept { return s_; }
  const MetricLieAlgebra& base() const noexcept { return s_.space(); }
  const Tolerances& tolerances() const noexcept { return tol_; }
  const ConnectionTable& base_nabla() const noexcept { return base_nabla_; }
  const TangentMetricLieAlgebra& tangent() const noexcept { return tangent_; }
  const ConnectionTable& tangent_nabla() const noexcept { return tangent_nabla_; }
  const Classification& base_classification() const noexcept { return base_class_; }
  const Classification& classification(Lift which) const noexcept { return which == Lift::Complete ? fc_class_ : fv_class_; }

 private:
  AlphaBetaStructure s_;
  Tolerances tol_;
  ConnectionTable base_nabla_;
  TangentMetricLieAlgebra tangent_;
  ConnectionTable tangent_nabla_;
  Classification base_class_;
  Classification fc_class_;
  Classification fv_class_;
};

namespace detail {

inline double g(const FlagContext& c, const AlgVector& a, const AlgVector& b) { return c.base().inner(a, b); }
inline AlgVector br(const FlagContext& c, const AlgVector& a, const AlgVector& b) { return c.base().bracket(a, b); }
inline AlgVector nab(const FlagContext& c, const AlgVector& a, const AlgVector& b) { return c.base_nabla().covariant(a, b); }
inline AlgVector adj(const FlagContext& c, const AlgVector& a, const AlgVector& b) {
  return ad_star(c.base().algebra(), c.base().metric(), a, b);
}

inline double base_sectional(const FlagContext& c, const AlgVector& v, const AlgVector& y) {
  return sectional(c.base(), c.base_nabla(), v, y, c.tolerances().plane);
}

/// Sectional curvature of span{A^c, B^v} in base terms (A, B orthonormal):
/// K(B,A) + 1/2 g([B, nabla_A B], A) - 1/2 g(nabla_B ad*_B A, A)
///        + 1/4 g([B, ad*_B A], A) + 1/2 g([[A,B],B], A).
inline double mixed_brace(const FlagContext& c, const AlgVector& a, const AlgVector& b) {
  const AlgVector adba = adj(c, b, a);
  return base_sectional(c, b, a) + 0.5 * g(c, br(c, b, nab(c, a, b)), a) - 0.5 * g(c, nab(c, b, adba), a) +
         0.25 * g(c, br(c, b, adba), a) + 0.5 * g(c, br(c, br(c, a, b), b), a);
}

/// Sectional curvature of span{Y^v, V^v}: K(V,Y) + g(nabla_[V,Y] Y, V) + 1/4 |[V,Y]|^2.
inline double vertical_brace(const FlagContext& c, const AlgVector& y, const AlgVector& v) {
  const AlgVector w = br(c, v, y);
  return base_sectional(c, v, y) + g(c, nab(c, w, y), v) + 0.25 * g(c, w, w);
}

/// Riemannian curvature of the lifted plane expressed through base quantities.
inline double riemannian_brace(const FlagContext& c, const FlagPlane& p) {
  const AlgVector& y = p.base_pole();
  const AlgVector& v = p.base_second();
  switch (p.tag()) {
    case CaseTag::cc: return base_sectional(c, v, y);
    case CaseTag::cv: return mixed_brace(c, y, v);
    case CaseTag::vc: return mixed_brace(c, v, y);
    case CaseTag::vv: return vertical_brace(c, y, v);
  }
  return 0.0;
}

/// 1 / (phi^2(s) (1 + b^2 D(s))); empty when phi or D is singular at s.
inline std::optional<double> berwald_prefactor(const PhiFamily& phi, double s, double b, bool with_d) {
  if (!phi.defined_at(s)) return std::nullopt;
  double den = phi.phi(s) * phi.phi(s);
  if (with_d) {
    const double core = phi.phi(s) - s * phi.dphi(s);
    if (core == 0.0) return std::nullopt;
    den *= 1.0 + b * b * phi.d2phi(s) / core;
  }
  if (!(den > 0.0) || !std::isfinite(den)) return std::nullopt;
  return 1.0 / den;
}

inline void require_orthonormal(const FlagContext& c, const FlagPlane& p) {
  (void)FlagPlane::make(c.base(), p.base_pole(), p.base_second(), p.tag(), std::max(c.tolerances().plane, 1e-9));
}

inline CurvatureResult berwald_formula(const FlagContext& c, const FlagPlane& p, Lift which) {
  require_orthonormal(c, p);
  const PhiFamily& phi = c.structure().phi();
  const AlgVector& x = c.structure().drift();
  const double sy = g(c, x, p.base_pole());
  const double bv = g(c, x, p.base_second());

  // The D factor appears when the transverse vector carries the drift's lift;
  // phi is evaluated at g(X,Y) when the pole does, at 0 otherwise.
  std::optional<double> pre;
  const bool pole_has_drift = pole_lift(p.tag()) == which;
  const bool second_has_drift = second_lift(p.tag()) == which;
  pre = berwald_prefactor(phi, pole_has_drift ? sy : 0.0, bv, second_has_drift);
  if (!pre) {
    return CurvatureResult::undefined(CurvatureMethod::TheoremFormula,
                                      phi.name() + " metric is singular on this flag (s = " +
                                          std::to_string(pole_has_drift ? sy : 0.0) + ")");
  }
  const double brace = riemannian_brace(c, p);
  CurvatureResult r;
  r.method = CurvatureMethod::TheoremFormula;
  r.value = *pre * brace;
  r.terms = {{"riemannian_brace", brace}, {"prefactor", *pre}, {"g(X,Y)", sy}, {"g(X,V)", bv}};
  return r;
}

}  // namespace detail

/// Definition-level flag curvature
///   K = g_y(R(u,y)y, u) / (g_y(y,y) g_y(u,u) - g_y(u,y)^2)
/// with R from the Koszul table of the tangent algebra and g_y from finite
/// differences of the lifted F^2. Valid when the lifted metric is Berwald.
inline double flag_curvature_oracle(const FlagContext& c, Lift which, const LiftedVector& pole, const LiftedVector& second,
                                    FiniteDifference fd = {}) {
  const AlphaBetaNorm F = lifted_norm(c.structure(), which);
  const Eigen::VectorXd y = pole.stacked();
  const Eigen::VectorXd u = second.stacked();
  const Eigen::VectorXd ruy = curvature(c.tangent().tangent, c.tangent_nabla(), u, y);
  const double gyy = fundamental_tensor(F, y, y, y, fd);
  const double guu = fundamental_tensor(F, y, u, u, fd);
  const double guy = fundamental_tensor(F, y, u, y, fd);
  const double den = gyy * guu - guy * guy;
  if (!(den > c.tolerances().plane)) throw DegeneratePlaneError("oracle: flag is degenerate for g_y");
  return fundamental_tensor(F, y, ruy, u, fd) / den;
}

inline CurvatureResult flag_oracle_berwald(const FlagContext& c, Lift which, const FlagPlane& p, FiniteDifference fd = {}) {
  if (!c.classification(which).berwald) {
    throw NotBerwaldError(std::string("flag oracle needs a Berwald lift; F^") + to_string(which) + " is not Berwald");
  }
  CurvatureResult r;
  r.method = CurvatureMethod::Oracle;
  r.value = flag_curvature_oracle(c, which, p.pole(), p.second(), fd);
  return r;
}

/// Flag curvature of F^c for a Berwald base metric.
inline CurvatureResult kc_berwald(const FlagContext& c, const FlagPlane& p) {
  if (!c.base_classification().berwald) throw PreconditionError("kc_berwald: F is not of Berwald type");
  return detail::berwald_formula(c, p, Lift::Complete);
}

/// Flag curvature of F^v when F^v is Berwald.
inline CurvatureResult kv_berwald(const FlagContext& c, const FlagPlane& p) {
  if (!c.classification(Lift::Vertical).berwald) throw PreconditionError("kv_berwald: F^v is not of Berwald type");
  return detail::berwald_formula(c, p, Lift::Vertical);
}

namespace detail {

/// Flag curvature of a Douglas-type Randers metric alpha~ + g~(X~, .) on the
/// tangent algebra:
///   K = a(y)^2/F(y)^2 K~(P) + (3 g~(U~(y,y),X~)^2 - 4 F(y) g~(U~(y,U~(y,y)),X~)) / (4 F(y)^4).
inline CurvatureResult randers_formula(const FlagContext& c, const FlagPlane& p, Lift which) {
  const MetricLieAlgebra& tm = c.tangent().tangent;
  const Eigen::VectorXd x = lift(which, c.structure().drift()).stacked();
  const Eigen::VectorXd y = p.pole().stacked();
  const Eigen::VectorXd u = p.second().stacked();
  const double alpha2 = tm.inner(y, y);
  const double f = std::sqrt(alpha2) + tm.inner(x, y);
  if (!(f > 0.0)) return CurvatureResult::undefined(CurvatureMethod::RandersFormula, "F(y) <= 0");
  const double kt = sectional(tm, c.tangent_nabla(), u, y, c.tolerances().plane);
  const Eigen::VectorXd uyy = u_map(tm, y, y);
  const double first = tm.inner(uyy, x);
  const double second = tm.inner(u_map(tm, y, uyy), x);
  CurvatureResult r;
  r.method = CurvatureMethod::RandersFormula;
  r.value = alpha2 / (f * f) * kt + (3.0 * first * first - 4.0 * f * second) / (4.0 * std::pow(f, 4));
  r.terms = {{"tangent_sectional", kt}, {"F(pole)", f}, {"g~(U~(y,y),X~)", first}, {"g~(U~(y,U~(y,y)),X~)", second}};
  return r;
}

inline void require_randers_douglas(const FlagContext& c, Lift which, const char* who) {
  if (c.structure().phi().kind() != PhiKind::Randers) throw PreconditionError(std::string(who) + ": phi is not Randers");
  if (!c.classification(which).douglas) throw PreconditionError(std::string(who) + ": lifted metric is not of Douglas type");
}

}  // namespace detail

/// Flag curvature of F^c for a Douglas-type Randers base metric. The value is
/// the tangent-algebra formula; `printed_value` holds the case-by-case
/// expression in base quantities.
inline CurvatureResult kc_randers_douglas(const FlagContext& c, const FlagPlane& p) {
  detail::require_randers_douglas(c, Lift::Complete, "kc_randers_douglas");
  detail::require_orthonormal(c, p);
  CurvatureResult r = detail::randers_formula(c, p, Lift::Complete);

  using detail::g;
  using detail::br;
  const AlgVector& x = c.structure().drift();
  const AlgVector& y = p.base_pole();
  const double f = 1.0 + g(c, x, y);
  const LiftDecomposition d = lift_decompose(c.tangent(), y);
  const double brace = detail::riemannian_brace(c, p);
  const double gxyy = g(c, br(c, x, y), y);
  const double gyxy = g(c, br(c, y, x), y);
  switch (p.tag()) {
    case CaseTag::cc:
      r.printed_value = brace / (f * f) + (3.0 * gxyy - 4.0 * f * g(c, u_map(c.base(), y, d.eta), x)) / (4.0 * f * f);
      break;
    case CaseTag::cv:
      r.printed_value = brace / (f * f) + (3.0 * gxyy * gxyy - 4.0 * f * g(c, u_map(c.base(), y, d.eta), x)) / (4.0 * f * f);
      break;
    case CaseTag::vc:
    case CaseTag::vv:
      r.printed_value = brace + 0.25 * (3.0 * gyxy * gyxy + 4.0 * g(c, u_map(c.base(), y, d.mu), x));
      break;
  }
  return r;
}

/// Flag curvature of F^v for a Douglas-type Randers base metric.
inline CurvatureResult kv_randers_douglas(const FlagContext& c, const FlagPlane& p) {
  detail::require_randers_douglas(c, Lift::Vertical, "kv_randers_douglas");
  detail::require_orthonormal(c, p);

  const MetricLieAlgebra& tm = c.tangent().tangent;
  const AlgVector& x = c.structure().drift();
  const AlgVector& y = p.base_pole();
  const LiftDecomposition d = lift_decompose(c.tangent(), y);
  const Eigen::VectorXd xv = lift_vertical(x).stacked();
  const double scale = std::max(1.0, x.norm() * std::pow(std::max(1.0, y.norm()), 2));
  const double z1 = std::abs(tm.inner(d.complete_square().stacked(), xv));
  const double z2 = std::abs(tm.inner(d.vertical_square().stacked(), xv));
  if (std::max(z1, z2) > 1e3 * c.tolerances().alg * scale) {
    throw InternalInconsistency("kv_randers_douglas: g~(U~(Y,Y), X^v) should vanish for both lifts of Y");
  }

  CurvatureResult r = detail::randers_formula(c, p, Lift::Vertical);
  using detail::g;
  using detail::br;
  const double f = 1.0 + g(c, x, y);
  const double brace = detail::riemannian_brace(c, p);
  switch (p.tag()) {
    case CaseTag::cc:
    case CaseTag::cv:
      r.printed_value = brace - 0.5 * g(c, br(c, x, y), d.delta);
      break;
    case CaseTag::vc:
    case CaseTag::vv:
      r.printed_value = brace / (f * f) - g(c, br(c, x, d.eta), y) / (2.0 * std::pow(f, 4));
      break;
  }
  return r;
}

/// Closed-form Matsumoto and Kropina flag curvatures for a Berwald base metric.
/// Kropina flags with a zero or negative drift component on the pole are undefined.
inline CurvatureResult example_specializations(const FlagContext& c, Lift which, const FlagPlane& p) {
  const PhiKind kind = c.structure().phi().kind();
  if (kind != PhiKind::Matsumoto && kind != PhiKind::Kropina) {
    throw PreconditionError("example_specializations: phi must be Matsumoto or Kropina");
  }
  if (!c.base_classification().berwald) throw PreconditionError("example_specializations: F is not of Berwald type");
  if (which == Lift::Vertical && !c.classification(Lift::Vertical).berwald) {
    throw PreconditionError("example_specializations: F^v is not of Berwald type");
  }
  detail::require_orthonormal(c, p);

  const AlgVector& x = c.structure().drift();
  const double s = detail::g(c, x, p.base_pole());
  const double b = detail::g(c, x, p.base_second());
  // Cells where the pole carries the drift's lift use s = g(X,Y); others s = 0.
  const bool pole_has_drift = pole_lift(p.tag()) == which;
  const bool second_has_drift = second_lift(p.tag()) == which;

  double pre = 0.0;
  if (kind == PhiKind::Matsumoto) {
    const double t = pole_has_drift ? s : 0.0;
    if (second_has_drift) {
      pre = std::pow(1.0 - t, 3) * (1.0 - 2.0 * t) / (1.0 + 2.0 * b * b + 2.0 * t * t - 3.0 * t);
    } else {
      pre = (1.0 - t) * (1.0 - t);
    }
  } else {
    if (!pole_has_drift) {
      return CurvatureResult::undefined(CurvatureMethod::TheoremFormula, "Kropina flag curvature is not defined for this flag");
    }
    if (!(s > 0.0)) {
      return CurvatureResult::undefined(CurvatureMethod::TheoremFormula, "Kropina metric undefined at the pole (g(X,Y) <= 0)");
    }
    pre = second_has_drift ? std::pow(s, 4) / (b * b + s * s) : s * s;
  }
  const double brace = detail::riemannian_brace(c, p);
  CurvatureResult r;
  r.method = CurvatureMethod::TheoremFormula;
  r.value = pre * brace;
  r.terms = {{"riemannian_brace", brace}, {"prefactor", pre}, {"g(X,Y)", s}, {"g(X,V)", b}};
  return r;
}

}  // namespace liftfinsler
