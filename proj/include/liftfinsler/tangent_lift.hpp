#pragma once

#include <Eigen/Dense>

#include <vector>

#include "liftfinsler/riem_connection.hpp"

namespace liftfinsler {

enum class Lift { Complete, Vertical };

inline const char* to_string(Lift l) { return l == Lift::Complete ? "c" : "v"; }

/// Element of the tangent algebra Lie(TG) in the basis
/// (e_1^c, ..., e_n^c, e_1^v, ..., e_n^v).
struct LiftedVector {
  AlgVector complete_part;
  AlgVector vertical_part;

  int base_dim() const { return static_cast<int>(complete_part.size()); }

  Eigen::VectorXd stacked() const {
    Eigen::VectorXd out(complete_part.size() + vertical_part.size());
    out << complete_part, vertical_part;
    return out;
  }

  static LiftedVector from_stacked(const Eigen::VectorXd& v) {
    if (v.size() % 2 != 0) throw DimensionError("lifted vector must have even length");
    const Eigen::Index n = v.size() / 2;
    return {v.head(n), v.tail(n)};
  }

  LiftedVector operator+(const LiftedVector& o) const { return {complete_part + o.complete_part, vertical_part + o.vertical_part}; }
  LiftedVector operator*(double s) const { return {s * complete_part, s * vertical_part}; }
};

inline LiftedVector lift_complete(const AlgVector& x) { return {x, AlgVector::Zero(x.size())}; }
inline LiftedVector lift_vertical(const AlgVector& x) { return {AlgVector::Zero(x.size()), x}; }
inline LiftedVector lift(Lift which, const AlgVector& x) {
  return which == Lift::Complete ? lift_complete(x) : lift_vertical(x);
}

/// Base metric Lie algebra and its 2n-dimensional tangent metric Lie algebra.
struct TangentMetricLieAlgebra {
  MetricLieAlgebra base;
  MetricLieAlgebra tangent;
};

/// Brackets [X^c,Y^c] = [X,Y]^c, [X^v,Y^c] = [X,Y]^v, [X^v,Y^v] = 0 and the
/// block-diagonal metric g~ = diag(g, g).
inline TangentMetricLieAlgebra tangent_algebra(const MetricLieAlgebra& m) {
  const int n = m.dim();
  const int t = 2 * n;
  std::vector<double> c(static_cast<std::size_t>(t) * t * t, 0.0);
  auto at = [&](int i, int j, int k) -> double& { return c[(static_cast<std::size_t>(i) * t + j) * t + k]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double v = m.algebra().c(i, j, k);
        if (v == 0.0) continue;
        at(i, j, k) = v;
        at(n + i, j, n + k) = v;
        at(i, n + j, n + k) = v;
      }
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(t, t);
  g.topLeftCorner(n, n) = m.metric().matrix();
  g.bottomRightCorner(n, n) = m.metric().matrix();
  return {m, MetricLieAlgebra(LieAlgebra(t, std::move(c)), MetricTensor(g))};
}

/// Lifted Levi-Civita connection assembled from base quantities:
///   nabla~_{X^c} Y^c = (nabla_X Y)^c
///   nabla~_{X^v} Y^v = (nabla_X Y - 1/2 [X,Y])^c
///   nabla~_{X^c} Y^v = (nabla_X Y + 1/2 ad*_Y X)^v
///   nabla~_{X^v} Y^c = (nabla_Y X + 1/2 ad*_X Y + [X,Y])^v
/// The last case follows from torsion-freeness and the bracket [X^v,Y^c] = [X,Y]^v.
inline LiftedVector lifted_nabla_formula(const MetricLieAlgebra& m, const ConnectionTable& base_nabla, const LiftedVector& a,
                                       const LiftedVector& b) {
  const auto& alg = m.algebra();
  const auto& g = m.metric();
  const AlgVector& ac = a.complete_part;
  const AlgVector& av = a.vertical_part;
  const AlgVector& bc = b.complete_part;
  const AlgVector& bv = b.vertical_part;

  AlgVector complete = base_nabla.covariant(ac, bc) + base_nabla.covariant(av, bv) - 0.5 * alg.bracket(av, bv);
  AlgVector vertical = base_nabla.covariant(ac, bv) + 0.5 * ad_star(alg, g, bv, ac) + base_nabla.covariant(bc, av) +
                       0.5 * ad_star(alg, g, av, bc) + alg.bracket(av, bc);
  return {complete, vertical};
}

inline LiftedVector lifted_nabla_formula(const MetricLieAlgebra& m, const LiftedVector& a, const LiftedVector& b) {
  return lifted_nabla_formula(m, levi_civita(m), a, b);
}

/// Full 2n x 2n table of lifted_nabla_formula on the tangent basis.
inline ConnectionTable lifted_nabla_formula_table(const MetricLieAlgebra& m) {
  const int n = m.dim();
  const ConnectionTable base = levi_civita(m);
  ConnectionTable t(2 * n);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j < 2 * n; ++j) {
      const auto ei = LiftedVector::from_stacked(Eigen::VectorXd::Unit(2 * n, i));
      const auto ej = LiftedVector::from_stacked(Eigen::VectorXd::Unit(2 * n, j));
      t.at(i, j) = lifted_nabla_formula(m, base, ei, ej).stacked();
    }
  return t;
}

/// Koszul formula applied directly to the tangent metric Lie algebra.
inline ConnectionTable lifted_nabla_oracle(const MetricLieAlgebra& m) { return levi_civita(tangent_algebra(m).tangent); }

}  // namespace liftfinsler
