#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "liftfinsler/errors.hpp"
#include "liftfinsler/tolerances.hpp"
#include "liftfinsler/validation.hpp"

namespace liftfinsler {

/// Coordinates of a Lie algebra element in the algebra's input basis.
using AlgVector = Eigen::VectorXd;

namespace detail {

inline void require_dim(const Eigen::VectorXd& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                         std::to_string(v.size()));
  }
}

}  // namespace detail

/// Nonzero structure constant [e_i, e_j] = ... + value e_k (0-based indices).
struct BracketEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  double value = 0.0;
};

/// Finite-dimensional real Lie algebra given by dense structure constants
/// C[i][j][k], meaning [e_i, e_j] = sum_k C[i][j][k] e_k.
class LieAlgebra {
 public:
  /// Abelian algebra of the given dimension.
  explicit LieAlgebra(int dim) : n_(dim), c_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {
    if (dim <= 0) throw DimensionError("Lie algebra dimension must be positive");
  }

  /// Raw constants in row-major (i, j, k) order. No antisymmetrization is
  /// applied; use validate() to check the result.
  LieAlgebra(int dim, std::vector<double> structure) : n_(dim), c_(std::move(structure)) {
    if (dim <= 0) throw DimensionError("Lie algebra dimension must be positive");
    if (c_.size() != static_cast<std::size_t>(dim) * dim * dim) {
      throw DimensionError("structure constant array must have dim^3 entries");
    }
  }

  /// Builds constants from [e_i, e_j] entries; the antisymmetric partner is implied.
  static LieAlgebra from_brackets(int dim, std::span<const BracketEntry> entries) {
    LieAlgebra a(dim);
    for (const auto& e : entries) {
      if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim || e.j >= dim || e.k >= dim) {
        throw DimensionError("bracket entry index out of range");
      }
      a.c_[a.index(e.i, e.j, e.k)] = e.value;
      a.c_[a.index(e.j, e.i, e.k)] = -e.value;
    }
    return a;
  }

  int dim() const noexcept { return n_; }

  double c(int i, int j, int k) const { return c_[index(i, j, k)]; }

  const std::vector<double>& structure() const noexcept { return c_; }

  AlgVector basis(int i) const { return AlgVector::Unit(n_, i); }

  AlgVector bracket(const AlgVector& x, const AlgVector& y) const {
    detail::require_dim(x, n_, "bracket");
    detail::require_dim(y, n_, "bracket");
    AlgVector out = AlgVector::Zero(n_);
    for (int i = 0; i < n_; ++i) {
      if (x[i] == 0.0) continue;
      for (int j = 0; j < n_; ++j) {
        const double w = x[i] * y[j];
        if (w == 0.0) continue;
        for (int k = 0; k < n_; ++k) out[k] += w * c(i, j, k);
      }
    }
    return out;
  }

  /// Matrix of ad_x : y -> [x, y].
  Eigen::MatrixXd ad(const AlgVector& x) const {
    detail::require_dim(x, n_, "ad");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) m.col(j) = bracket(x, basis(j));
    return m;
  }

  bool is_abelian() const {
    return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
  }

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }

  int n_;
  std::vector<double> c_;
};

/// Left-invariant Riemannian metric: a symmetric positive definite Gram
/// matrix in the algebra basis.
class MetricTensor {
 public:
  explicit MetricTensor(const Eigen::MatrixXd& g, double tol_pd = Tolerances{}.pd) {
    if (g.rows() != g.cols() || g.rows() == 0) throw DimensionError("metric must be a non-empty square matrix");
    if (!g.allFinite()) throw MetricError("metric has non-finite entries");
    const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (asym > 1e-12 * scale) {
      throw MetricError("metric is not symmetric (max |g - g^T| = " + std::to_string(asym) + ")");
    }
    g_ = 0.5 * (g + g.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g_, Eigen::EigenvaluesOnly);
    min_eigenvalue_ = eig.eigenvalues().minCoeff();
    if (!(min_eigenvalue_ > tol_pd)) {
      throw MetricError("metric is not positive definite (min eigenvalue " + std::to_string(min_eigenvalue_) + ")");
    }
    llt_.compute(g_);
  }

  static MetricTensor identity(int n) { return MetricTensor(Eigen::MatrixXd::Identity(n, n)); }

  int dim() const noexcept { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return g_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

  double inner(const AlgVector& x, const AlgVector& y) const {
    detail::require_dim(x, g_.rows(), "metric inner product");
    detail::require_dim(y, g_.rows(), "metric inner product");
    return x.dot(g_ * y);
  }

  double norm(const AlgVector& x) const { return std::sqrt(inner(x, x)); }

  /// Solves g w = rhs, i.e. raises an index.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    detail::require_dim(rhs, g_.rows(), "metric solve");
    return llt_.solve(rhs);
  }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return llt_.solve(rhs); }

 private:
  Eigen::MatrixXd g_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double min_eigenvalue_ = 0.0;
};

/// Antisymmetry and Jacobi residuals of the structure constants.
inline ValidationReport validate(const LieAlgebra& a, double tol_alg = Tolerances{}.alg) {
  const int n = a.dim();
  double antisym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) antisym = std::max(antisym, std::abs(a.c(i, j, k) + a.c(j, i, k)));

  double jacobi = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) {
            s += a.c(i, j, m) * a.c(m, l, k) + a.c(j, l, m) * a.c(m, i, k) + a.c(l, i, m) * a.c(m, j, k);
          }
          jacobi = std::max(jacobi, std::abs(s));
        }

  ValidationReport r;
  r.checks.push_back({"antisymmetry", antisym, tol_alg, antisym <= tol_alg, "max |C[i][j][k] + C[j][i][k]|"});
  r.checks.push_back({"jacobi", jacobi, tol_alg, jacobi <= tol_alg, "max cyclic Jacobi residual"});
  return r;
}

/// Metric adjoint of ad_x applied to y: g(ad*_x y, z) = g(y, [x, z]) for all z.
inline AlgVector ad_star(const LieAlgebra& a, const MetricTensor& g, const AlgVector& x, const AlgVector& y) {
  if (g.dim() != a.dim()) throw DimensionError("ad_star: metric and algebra dimensions differ");
  detail::require_dim(y, a.dim(), "ad_star");
  return g.solve(Eigen::VectorXd(a.ad(x).transpose() * (g.matrix() * y)));
}

struct DerivedAndCenter {
  Eigen::MatrixXd derived;  // columns: orthonormal (Euclidean) basis of [g, g]
  Eigen::MatrixXd center;   // columns: orthonormal (Euclidean) basis of z(g)
};

inline DerivedAndCenter derived_and_center(const LieAlgebra& a, double tol_rank = Tolerances{}.rank) {
  const int n = a.dim();
  DerivedAndCenter out;

  Eigen::MatrixXd brackets = Eigen::MatrixXd::Zero(n, std::max(1, n * (n - 1) / 2));
  int col = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) brackets.col(col++) = a.bracket(a.basis(i), a.basis(j));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_d(brackets, Eigen::ComputeFullU);
  int rank = 0;
  for (Eigen::Index s = 0; s < svd_d.singularValues().size(); ++s)
    if (svd_d.singularValues()[s] > tol_rank) ++rank;
  out.derived = svd_d.matrixU().leftCols(rank);

  // x -> ad_x, stacked as an n^2 x n matrix.
  Eigen::MatrixXd stacked(n * n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd ad = a.ad(a.basis(i));
    stacked.col(i) = Eigen::Map<Eigen::VectorXd>(ad.data(), n * n);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_c(stacked, Eigen::ComputeFullV);
  int rank_c = 0;
  for (Eigen::Index s = 0; s < svd_c.singularValues().size(); ++s)
    if (svd_c.singularValues()[s] > tol_rank) ++rank_c;
  out.center = svd_c.matrixV().rightCols(n - rank_c);
  return out;
}

}  // namespace liftfinsler
