#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "liftfinsler/phi_family.hpp"
#include "liftfinsler/tangent_lift.hpp"

namespace liftfinsler {

/// Left-invariant (alpha,beta)-metric F(y) = alpha(y) phi(g(X,y)/alpha(y)) on a
/// metric Lie algebra. The 1-form beta is carried by its metric dual X (the drift).
class AlphaBetaStructure {
 public:
  AlphaBetaStructure(MetricLieAlgebra space, AlgVector drift, PhiFamily phi)
      : space_(std::move(space)), drift_(std::move(drift)), phi_(std::move(phi)) {
    detail::require_dim(drift_, space_.dim(), "drift vector");
  }

  const MetricLieAlgebra& space() const noexcept { return space_; }
  const AlgVector& drift() const noexcept { return drift_; }
  const PhiFamily& phi() const noexcept { return phi_; }
  int dim() const noexcept { return space_.dim(); }
  double drift_norm() const { return space_.metric().norm(drift_); }

 private:
  MetricLieAlgebra space_;
  AlgVector drift_;
  PhiFamily phi_;
};

/// F evaluated on a coordinate space with Gram matrix `gram` and drift `drift`;
/// shared by F (n-dim) and its lifts F^c, F^v (2n-dim).
class AlphaBetaNorm {
 public:
  AlphaBetaNorm(Eigen::MatrixXd gram, Eigen::VectorXd drift, PhiFamily phi)
      : gram_(std::move(gram)), drift_dual_(gram_ * drift), phi_(std::move(phi)) {}

  int dim() const noexcept { return static_cast<int>(gram_.rows()); }
  const PhiFamily& phi() const noexcept { return phi_; }

  double alpha(const Eigen::VectorXd& y) const { return std::sqrt(y.dot(gram_ * y)); }

  /// s = beta(y) / alpha(y).
  double ratio(const Eigen::VectorXd& y) const {
    detail::require_dim(y, dim(), "Finsler norm argument");
    const double a = alpha(y);
    if (a == 0.0) throw ZeroVectorError("F is not defined at the zero vector");
    return drift_dual_.dot(y) / a;
  }

  double operator()(const Eigen::VectorXd& y) const {
    const double s = ratio(y);
    if (!phi_.defined_at(s)) {
      throw UndefinedMetricError(phi_.name() + " metric is not defined here (s = " + std::to_string(s) + ")");
    }
    return alpha(y) * phi_.phi(s);
  }

  double squared(const Eigen::VectorXd& y) const {
    const double f = (*this)(y);
    return f * f;
  }

 private:
  Eigen::MatrixXd gram_;
  Eigen::VectorXd drift_dual_;
  PhiFamily phi_;
};

inline AlphaBetaNorm base_norm(const AlphaBetaStructure& s) {
  return AlphaBetaNorm(s.space().metric().matrix(), s.drift(), s.phi());
}

/// F^c uses g~(X^c, z), F^v uses g~(X^v, z), both with alpha~ from the block metric.
inline AlphaBetaNorm lifted_norm(const AlphaBetaStructure& s, Lift which) {
  const int n = s.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  g.topLeftCorner(n, n) = s.space().metric().matrix();
  g.bottomRightCorner(n, n) = s.space().metric().matrix();
  return AlphaBetaNorm(g, lift(which, s.drift()).stacked(), s.phi());
}

inline double eval_F(const AlphaBetaStructure& s, const AlgVector& y) { return base_norm(s)(y); }

inline double eval_lifted_F(const AlphaBetaStructure& s, Lift which, const LiftedVector& z) {
  return lifted_norm(s, which)(z.stacked());
}

/// Samples phi(s) - s phi'(s) + (b^2 - s^2) phi''(s) > 0 over |s| <= b <= ||X||_g
/// (boundary b = ||X||_g included) and checks ||X||_g < b0 and phi > 0.
inline ValidationReport validity_check(const AlphaBetaStructure& st, int samples = 64) {
  const PhiFamily& phi = st.phi();
  const double bnorm = st.drift_norm();
  ValidationReport r;

  const bool bound_ok = bnorm < phi.b0();
  r.checks.push_back({"norm_bound", bnorm, phi.b0(), bound_ok, "||X||_g < b0"});

  if (phi.kind() == PhiKind::Kropina) {
    r.checks.push_back({"kropina_drift_nonzero", bnorm, 0.0, bnorm > 0.0, "Kropina metrics need beta != 0"});
  }

  double min_expr = std::numeric_limits<double>::infinity();
  double min_phi = std::numeric_limits<double>::infinity();
  double at_s = 0.0;
  double at_b = 0.0;
  if (bound_ok) {
    samples = std::max(samples, 2);
    for (int ib = 0; ib <= samples; ++ib) {
      const double b = bnorm * ib / samples;
      for (int is = 0; is <= samples; ++is) {
        const double s = -b + 2.0 * b * is / samples;
        if (!phi.defined_at(s)) continue;
        const double e = phi.validity_expression(s, b);
        const double p = phi.phi(s);
        min_phi = std::min(min_phi, p);
        if (e < min_expr) {
          min_expr = e;
          at_s = s;
          at_b = b;
        }
      }
    }
  }
  if (!std::isfinite(min_expr)) {
    // Only reachable when the bound failed or no sample lies in the domain.
    r.checks.push_back({"phi_positive", 0.0, 0.0, false, "no admissible samples"});
    r.checks.push_back({"validity_inequality", 0.0, 0.0, false, "no admissible samples"});
    return r;
  }
  r.checks.push_back({"phi_positive", min_phi, 0.0, min_phi > 0.0, "min phi(s) over samples"});
  r.checks.push_back({"validity_inequality", min_expr, 0.0, min_expr > 0.0,
                      "min at s = " + std::to_string(at_s) + ", b = " + std::to_string(at_b)});
  return r;
}

/// Step control for the fundamental-tensor finite differences.
struct FiniteDifference {
  double relative_step = 2e-3;  // h = relative_step * max(1, |y|)
};

/// g_y(u, v) = 1/2 d^2/ds dt F^2(y + s u + t v) at s = t = 0, by centered
/// mixed differences with one Richardson refinement.
inline double fundamental_tensor(const AlphaBetaNorm& F, const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& v, FiniteDifference fd = {}) {
  detail::require_dim(y, F.dim(), "fundamental tensor");
  detail::require_dim(u, F.dim(), "fundamental tensor");
  detail::require_dim(v, F.dim(), "fundamental tensor");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  const Eigen::VectorXd uh = u / nu;
  const Eigen::VectorXd vh = v / nv;
  const double h = fd.relative_step * std::max(1.0, y.norm());

  auto mixed = [&](double step) {
    return (F.squared(y + step * uh + step * vh) - F.squared(y + step * uh - step * vh) -
            F.squared(y - step * uh + step * vh) + F.squared(y - step * uh - step * vh)) /
           (4.0 * step * step);
  };
  const double coarse = mixed(h);
  const double fine = mixed(0.5 * h);
  return 0.5 * (4.0 * fine - coarse) / 3.0 * nu * nv;
}

inline double fundamental_tensor(const AlphaBetaStructure& s, const AlgVector& y, const AlgVector& u, const AlgVector& v,
                                 FiniteDifference fd = {}) {
  return fundamental_tensor(base_norm(s), y, u, v, fd);
}

inline double fundamental_tensor(const AlphaBetaStructure& s, Lift which, const LiftedVector& y, const LiftedVector& u,
                                 const LiftedVector& v, FiniteDifference fd = {}) {
  return fundamental_tensor(lifted_norm(s, which), y.stacked(), u.stacked(), v.stacked(), fd);
}

enum class DouglasReason { Berwald, RandersDouglas, NotDouglas };

inline const char* to_string(DouglasReason r) {
  switch (r) {
    case DouglasReason::Berwald: return "berwald";
    case DouglasReason::RandersDouglas: return "randers_douglas";
    case DouglasReason::NotDouglas: return "not_douglas";
  }
  return "not_douglas";
}

/// A failed criterion: which test, on which basis vectors, by how much.
struct Witness {
  std::string criterion;
  std::string label;
  double residual = 0.0;

  bool operator==(const Witness&) const = default;
};

struct Classification {
  bool berwald = false;
  bool douglas = false;
  DouglasReason reason = DouglasReason::NotDouglas;
  double berwald_residual = 0.0;
  double douglas_residual = 0.0;  // closedness residual; 0 when not applicable
  double tolerance = 0.0;
  std::vector<Witness> witnesses;

  bool operator==(const Classification&) const = default;
};

namespace detail {

inline std::string basis_label(int i, int n, bool tangent) {
  if (!tangent) return "e" + std::to_string(i + 1);
  return "e" + std::to_string(i % n + 1) + (i < n ? "^c" : "^v");
}

/// Max over basis of |nabla_{e_i} X|_g, with witnesses.
inline double parallel_residual(const MetricLieAlgebra& m, const ConnectionTable& t, const AlgVector& x, double tol,
                                bool tangent, std::vector<Witness>& out) {
  double worst = 0.0;
  const int n = tangent ? m.dim() / 2 : m.dim();
  for (int i = 0; i < m.dim(); ++i) {
    const double r = m.metric().norm(t.covariant(m.algebra().basis(i), x));
    worst = std::max(worst, r);
    if (r > tol) out.push_back({"parallel_drift", "nabla_{" + basis_label(i, n, tangent) + "} X", r});
  }
  return worst;
}

/// Max over basis pairs of |g([e_i, e_j], X)|, with witnesses.
inline double closedness_residual(const MetricLieAlgebra& m, const AlgVector& x, double tol, bool tangent,
                                  std::vector<Witness>& out) {
  double worst = 0.0;
  const int n = tangent ? m.dim() / 2 : m.dim();
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i + 1; j < m.dim(); ++j) {
      const double r = std::abs(m.inner(m.bracket(m.algebra().basis(i), m.algebra().basis(j)), x));
      worst = std::max(worst, r);
      if (r > tol) {
        out.push_back({"drift_orthogonal_to_derived",
                       "g([" + basis_label(i, n, tangent) + "," + basis_label(j, n, tangent) + "], X)", r});
      }
    }
  return worst;
}

inline Classification finish(bool berwald, bool randers, double berwald_res, double closed_res, double tol,
                             std::vector<Witness> w) {
  Classification c;
  c.berwald = berwald;
  c.berwald_residual = berwald_res;
  c.douglas_residual = closed_res;
  c.tolerance = tol;
  if (berwald) {
    c.douglas = true;
    c.reason = DouglasReason::Berwald;
  } else if (randers && closed_res <= tol) {
    c.douglas = true;
    c.reason = DouglasReason::RandersDouglas;
  }
  if (c.douglas) {
    w.erase(std::remove_if(w.begin(), w.end(), [](const Witness& x) { return x.criterion == "drift_orthogonal_to_derived"; }),
            w.end());
  }
  c.witnesses = std::move(w);
  return c;
}

/// Direct tangent-level classification of F^c or F^v from the Koszul table of
/// the tangent algebra: Berwald iff the lifted drift is parallel, Douglas iff
/// Berwald or (Randers and the lifted drift annihilates all tangent brackets).
inline Classification classify_lift_direct(const AlphaBetaStructure& s, Lift which, double tol) {
  const auto tm = tangent_algebra(s.space());
  const ConnectionTable t = levi_civita(tm.tangent);
  const Eigen::VectorXd x = lift(which, s.drift()).stacked();
  std::vector<Witness> w;
  const double par = s.phi().is_riemannian() ? 0.0 : parallel_residual(tm.tangent, t, x, tol, true, w);
  const bool randers = s.phi().kind() == PhiKind::Randers;
  const double closed = randers ? closedness_residual(tm.tangent, x, tol, true, w) : 0.0;
  return finish(par <= tol, randers, par, closed, tol, std::move(w));
}

}  // namespace detail

/// Berwald iff X is parallel; Douglas iff Berwald or Randers with X orthogonal
/// to [g, g].
inline Classification classify_base(const AlphaBetaStructure& s, double tol = Tolerances{}.classification) {
  const ConnectionTable t = levi_civita(s.space());
  std::vector<Witness> w;
  const double par = s.phi().is_riemannian() ? 0.0 : detail::parallel_residual(s.space(), t, s.drift(), tol, false, w);
  const bool randers = s.phi().kind() == PhiKind::Randers;
  const double closed = randers ? detail::closedness_residual(s.space(), s.drift(), tol, false, w) : 0.0;
  return detail::finish(par <= tol, randers, par, closed, tol, std::move(w));
}

/// F^c is Douglas iff F is; Berwald iff F is. The tangent-level criteria are
/// recomputed and must agree.
inline Classification classify_fc(const AlphaBetaStructure& s, double tol = Tolerances{}.classification) {
  const Classification base = classify_base(s, tol);
  Classification direct = detail::classify_lift_direct(s, Lift::Complete, tol);
  if (direct.douglas != base.douglas || direct.berwald != base.berwald) {
    throw InternalInconsistency("F^c classification: base criteria give berwald=" + std::to_string(base.berwald) +
                                ", douglas=" + std::to_string(base.douglas) + " but tangent-level criteria give berwald=" +
                                std::to_string(direct.berwald) + ", douglas=" + std::to_string(direct.douglas));
  }
  return direct;
}

/// F^v is Berwald iff ad*_X = ad_X and nabla_X Y = 1/2 [X, Y] for all Y. For
/// Randers metrics F^v is Douglas iff F is; otherwise Douglas iff Berwald.
inline Classification classify_fv(const AlphaBetaStructure& s, double tol = Tolerances{}.classification) {
  const auto& m = s.space();
  const auto& a = m.algebra();
  const ConnectionTable t = levi_civita(m);
  const AlgVector& x = s.drift();

  bool predicted_berwald = true;
  if (!s.phi().is_riemannian()) {
    double worst = 0.0;
    for (int i = 0; i < m.dim(); ++i) {
      const AlgVector ei = a.basis(i);
      worst = std::max(worst, m.metric().norm(ad_star(a, m.metric(), x, ei) - a.bracket(x, ei)));
      worst = std::max(worst, m.metric().norm(t.covariant(x, ei) - 0.5 * a.bracket(x, ei)));
    }
    predicted_berwald = worst <= tol;
  }

  const Classification base = classify_base(s, tol);
  if (base.berwald && !s.phi().is_riemannian()) {
    // Berwald base: F^v Berwald iff X is central.
    double central = 0.0;
    for (int i = 0; i < m.dim(); ++i) central = std::max(central, m.metric().norm(a.bracket(x, a.basis(i))));
    if ((central <= tol) != predicted_berwald) {
      throw InternalInconsistency("F^v Berwald criterion disagrees with the centrality criterion for a Berwald base");
    }
  }

  const bool randers = s.phi().kind() == PhiKind::Randers;
  const bool predicted_douglas = predicted_berwald || (randers && base.douglas);

  Classification direct = detail::classify_lift_direct(s, Lift::Vertical, tol);
  if (direct.berwald != predicted_berwald || direct.douglas != predicted_douglas) {
    throw InternalInconsistency("F^v classification: base criteria give berwald=" + std::to_string(predicted_berwald) +
                                ", douglas=" + std::to_string(predicted_douglas) +
                                " but tangent-level criteria give berwald=" + std::to_string(direct.berwald) +
                                ", douglas=" + std::to_string(direct.douglas));
  }
  return direct;
}

}  // namespace liftfinsler
