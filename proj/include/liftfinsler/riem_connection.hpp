#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <utility>
#include <vector>

#include "liftfinsler/lie_core.hpp"

namespace liftfinsler {

/// A Lie algebra together with a left-invariant Riemannian metric.
class MetricLieAlgebra {
 public:
  MetricLieAlgebra(LieAlgebra algebra, MetricTensor metric) : algebra_(std::move(algebra)), metric_(std::move(metric)) {
    if (algebra_.dim() != metric_.dim()) throw DimensionError("algebra and metric dimensions differ");
  }

  int dim() const noexcept { return algebra_.dim(); }
  const LieAlgebra& algebra() const noexcept { return algebra_; }
  const MetricTensor& metric() const noexcept { return metric_; }

  AlgVector bracket(const AlgVector& x, const AlgVector& y) const { return algebra_.bracket(x, y); }
  double inner(const AlgVector& x, const AlgVector& y) const { return metric_.inner(x, y); }

 private:
  LieAlgebra algebra_;
  MetricTensor metric_;
};

/// Connection on left-invariant fields: nabla_{e_i} e_j = sum_k N[i][j][k] e_k.
class ConnectionTable {
 public:
  explicit ConnectionTable(int dim) : n_(dim), table_(static_cast<std::size_t>(dim) * dim, AlgVector::Zero(dim)) {}

  int dim() const noexcept { return n_; }

  const AlgVector& at(int i, int j) const { return table_[static_cast<std::size_t>(i) * n_ + j]; }
  AlgVector& at(int i, int j) { return table_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j, int k) const { return at(i, j)[k]; }

  /// nabla_x y for constant-coefficient (left-invariant) fields x, y.
  AlgVector covariant(const AlgVector& x, const AlgVector& y) const {
    detail::require_dim(x, n_, "covariant derivative");
    detail::require_dim(y, n_, "covariant derivative");
    AlgVector out = AlgVector::Zero(n_);
    for (int i = 0; i < n_; ++i) {
      if (x[i] == 0.0) continue;
      for (int j = 0; j < n_; ++j) {
        if (y[j] == 0.0) continue;
        out += (x[i] * y[j]) * at(i, j);
      }
    }
    return out;
  }

 private:
  int n_;
  std::vector<AlgVector> table_;
};

/// Levi-Civita connection from the Koszul formula
/// 2 g(nabla_x y, z) = g([x,y],z) - g([y,z],x) + g([z,x],y).
inline ConnectionTable levi_civita(const MetricLieAlgebra& m) {
  const int n = m.dim();
  const auto& a = m.algebra();
  const Eigen::MatrixXd& g = m.metric().matrix();

  // lowered[i][j][k] = g([e_i, e_j], e_k)
  std::vector<double> lowered(static_cast<std::size_t>(n) * n * n);
  auto low = [&](int i, int j, int k) -> double& { return lowered[(static_cast<std::size_t>(i) * n + j) * n + k]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd b = g * a.bracket(a.basis(i), a.basis(j));
      for (int k = 0; k < n; ++k) low(i, j, k) = b[k];
    }

  ConnectionTable t(n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) rhs[k] = 0.5 * (low(i, j, k) - low(j, k, i) + low(k, i, j));
      t.at(i, j) = m.metric().solve(rhs);
    }
  return t;
}

/// max_{i,j} |N[i][j] - N[j][i] - [e_i, e_j]|
inline double torsion_residual(const MetricLieAlgebra& m, const ConnectionTable& t) {
  double r = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) {
      AlgVector d = t.at(i, j) - t.at(j, i) - m.bracket(m.algebra().basis(i), m.algebra().basis(j));
      r = std::max(r, d.cwiseAbs().maxCoeff());
    }
  return r;
}

/// max_{i,j,k} |g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k)|
inline double metric_compatibility_residual(const MetricLieAlgebra& m, const ConnectionTable& t) {
  const Eigen::MatrixXd& g = m.metric().matrix();
  double r = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j)
      for (int k = 0; k < m.dim(); ++k)
        r = std::max(r, std::abs(g.row(k).dot(t.at(i, j)) + g.row(j).dot(t.at(i, k))));
  return r;
}

/// R(u,y)y = nabla_u nabla_y y - nabla_y nabla_u y - nabla_[u,y] y.
inline AlgVector curvature(const MetricLieAlgebra& m, const ConnectionTable& t, const AlgVector& u, const AlgVector& y) {
  if (t.dim() != m.dim()) throw DimensionError("curvature: connection table dimension mismatch");
  return t.covariant(u, t.covariant(y, y)) - t.covariant(y, t.covariant(u, y)) - t.covariant(m.bracket(u, y), y);
}

/// Sectional curvature of span{v, y}.
inline double sectional(const MetricLieAlgebra& m, const ConnectionTable& t, const AlgVector& v, const AlgVector& y,
                        double tol_plane = Tolerances{}.plane) {
  const double gram = m.inner(y, y) * m.inner(v, v) - std::pow(m.inner(v, y), 2);
  if (!(gram > tol_plane)) throw DegeneratePlaneError("sectional: vectors span a degenerate plane");
  return m.inner(curvature(m, t, v, y), v) / gram;
}

/// Symmetric map U with 2 g(U(v1,v2), v3) = g([v3,v1],v2) + g([v3,v2],v1).
inline AlgVector u_map(const MetricLieAlgebra& m, const AlgVector& v1, const AlgVector& v2) {
  const auto& a = m.algebra();
  const Eigen::MatrixXd& g = m.metric().matrix();
  detail::require_dim(v1, m.dim(), "u_map");
  detail::require_dim(v2, m.dim(), "u_map");
  Eigen::VectorXd rhs(m.dim());
  const Eigen::VectorXd gv1 = g * v1;
  const Eigen::VectorXd gv2 = g * v2;
  for (int k = 0; k < m.dim(); ++k) {
    const AlgVector ek = a.basis(k);
    rhs[k] = 0.5 * (a.bracket(ek, v1).dot(gv2) + a.bracket(ek, v2).dot(gv1));
  }
  return m.metric().solve(rhs);
}

}  // namespace liftfinsler
