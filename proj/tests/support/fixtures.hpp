#pragma once

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

#include "liftfinsler/liftfinsler.hpp"

namespace lftest {

using namespace liftfinsler;

inline LieAlgebra abelian(int n) { return LieAlgebra(n); }

/// [e1,e2] = e3
inline LieAlgebra heisenberg3() {
  const BracketEntry e[] = {{0, 1, 2, 1.0}};
  return LieAlgebra::from_brackets(3, e);
}

/// [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2
inline LieAlgebra so3() {
  const BracketEntry e[] = {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}};
  return LieAlgebra::from_brackets(3, e);
}

/// h3 + R with e4 central.
inline LieAlgebra heisenberg3_plus_r() {
  const BracketEntry e[] = {{0, 1, 2, 1.0}};
  return LieAlgebra::from_brackets(4, e);
}

/// Non-unimodular solvable algebra: [e1,e2] = e2, [e1,e3] = e3.
inline LieAlgebra book3() {
  const BracketEntry e[] = {{0, 1, 1, 1.0}, {0, 2, 2, 1.0}};
  return LieAlgebra::from_brackets(3, e);
}

/// gl(2)-like sl(2): [h,e] = 2e, [h,f] = -2f, [e,f] = h.
inline LieAlgebra sl2() {
  const BracketEntry e[] = {{0, 1, 1, 2.0}, {0, 2, 2, -2.0}, {1, 2, 0, 1.0}};
  return LieAlgebra::from_brackets(3, e);
}

inline Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng, double spread = 1.0) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  return spread * a * a.transpose() / n + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

/// Same algebra written in the basis f_a = sum_i P(i,a) e_i.
inline LieAlgebra change_basis(const LieAlgebra& a, const Eigen::MatrixXd& p) {
  const int n = a.dim();
  const Eigen::MatrixXd q = p.inverse();
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd b = q * a.bracket(p.col(i), p.col(j));
      for (int k = 0; k < n; ++k) c[(static_cast<std::size_t>(i) * n + j) * n + k] = b[k];
    }
  return LieAlgebra(n, std::move(c));
}

inline Eigen::MatrixXd random_invertible(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    Eigen::MatrixXd p(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p(i, j) = normal(rng);
    if (std::abs(p.determinant()) > 0.3) return p;
  }
}

inline AlgVector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  AlgVector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline AlgVector with_norm(const MetricLieAlgebra& m, AlgVector v, double r) { return v * (r / m.metric().norm(v)); }

/// Random drift of g-norm r, g-orthogonal to [g, g]; zero when [g, g] = g.
inline AlgVector orthogonal_to_derived(const MetricLieAlgebra& m, std::mt19937_64& rng, double r) {
  const Eigen::MatrixXd d = derived_and_center(m.algebra()).derived;
  const Eigen::MatrixXd& g = m.metric().matrix();
  AlgVector x = random_vector(m.dim(), rng);
  if (d.cols() > 0) x -= d * (d.transpose() * g * d).ldlt().solve(d.transpose() * g * x);
  if (m.metric().norm(x) < 1e-12) return AlgVector::Zero(m.dim());
  return with_norm(m, x, r);
}

/// Random central drift of g-norm r; zero for centerless algebras.
inline AlgVector central(const MetricLieAlgebra& m, std::mt19937_64& rng, double r) {
  const Eigen::MatrixXd z = derived_and_center(m.algebra()).center;
  if (z.cols() == 0) return AlgVector::Zero(m.dim());
  return with_norm(m, z * random_vector(static_cast<int>(z.cols()), rng), r);
}

inline MetricLieAlgebra identity_metric(LieAlgebra a) {
  const int n = a.dim();
  return MetricLieAlgebra(std::move(a), MetricTensor::identity(n));
}

inline FlagPlane plane(const MetricLieAlgebra& m, const AlgVector& y, const AlgVector& v, CaseTag t) {
  return FlagPlane::orthonormalized(m, y, v, t);
}

inline AlgVector e(int n, int i) { return AlgVector::Unit(n, i); }

}  // namespace lftest
