#pragma once

// Flag curvature of a left-invariant (alpha,beta)-metric on a Lie algebra from
// the homogeneous spray and its Berwald-type curvature operator. Uses only the
// bracket, the metric matrix and exact derivatives of F^2 (nested dual numbers),
// so it shares no code with the connection-based formulas.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "liftfinsler/lie_core.hpp"
#include "liftfinsler/phi_family.hpp"

namespace lftest {

template <class T>
struct Dual {
  T re{};
  T du{};
};

template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.re + b.re, a.du + b.du}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.re - b.re, a.du - b.du}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.re * b.re, a.re * b.du + a.du * b.re}; }
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  return {a.re / b.re, (a.du * b.re - a.re * b.du) / (b.re * b.re)};
}
template <class T> Dual<T> operator*(double k, const Dual<T>& a) { return {k * a.re, k * a.du}; }
template <class T> Dual<T> operator+(double k, const Dual<T>& a) { return {k + a.re, a.du}; }
template <class T> Dual<T> operator-(double k, const Dual<T>& a) { return {k - a.re, -1.0 * a.du}; }
template <class T> Dual<T> operator/(double k, const Dual<T>& a) { return {k / a.re, (-k) * a.du / (a.re * a.re)}; }

inline double sqrt_of(double x) { return std::sqrt(x); }
template <class T> Dual<T> sqrt_of(const Dual<T>& a) {
  const T s = sqrt_of(a.re);
  return {s, a.du / (2.0 * s)};
}

template <class S>
struct Const {
  static S make(double v) { return v; }
};
template <class T>
struct Const<Dual<T>> {
  static Dual<T> make(double v) { return {Const<T>::make(v), Const<T>::make(0.0)}; }
};
template <class S> S constant(double v) { return Const<S>::make(v); }

using D3 = Dual<Dual<Dual<double>>>;

class SprayOracle {
 public:
  SprayOracle(liftfinsler::LieAlgebra algebra, Eigen::MatrixXd gram, Eigen::VectorXd drift, liftfinsler::PhiKind kind)
      : a_(std::move(algebra)), g_(std::move(gram)), xg_(g_ * drift), kind_(kind), n_(a_.dim()) {}

  /// 1/2 d^2/ds dt F^2(y + s u + t v)
  double g(const Eigen::VectorXd& y, const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return 0.5 * f2(y, u, v, Eigen::VectorXd::Zero(n_)).du.du.re;
  }

  /// 1/4 d^3/ds dt dr F^2(y + s u + t v + r w)
  double cartan(const Eigen::VectorXd& y, const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Eigen::VectorXd& w) const {
    return 0.25 * f2(y, u, v, w).du.du.du;
  }

  Eigen::MatrixXd g_matrix(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = g(y, a_.basis(i), a_.basis(j));
    return m;
  }

  /// Spray vector: g_y(eta, u) = g_y(y, [u, y]).
  Eigen::VectorXd eta(const Eigen::VectorXd& y) const {
    const Eigen::MatrixXd gy = g_matrix(y);
    Eigen::VectorXd rhs(n_);
    for (int u = 0; u < n_; ++u) rhs[u] = (gy * y).dot(a_.bracket(a_.basis(u), y));
    return gy.ldlt().solve(rhs);
  }

  /// Column a is N_y(e_a): 2 g_y(N u, v) = g_y([v,u],y) + g_y([v,y],u) + g_y([u,y],v) - 2 C_y(u,v,eta).
  Eigen::MatrixXd n_matrix(const Eigen::VectorXd& y) const {
    const Eigen::MatrixXd gy = g_matrix(y);
    const Eigen::VectorXd et = eta(y);
    Eigen::MatrixXd rhs(n_, n_);
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v) {
        const Eigen::VectorXd eu = a_.basis(u);
        const Eigen::VectorXd ev = a_.basis(v);
        const double t = (gy * y).dot(a_.bracket(ev, eu)) + (gy * eu).dot(a_.bracket(ev, y)) + (gy * ev).dot(a_.bracket(eu, y)) -
                         2.0 * cartan(y, eu, ev, et);
        rhs(v, u) = 0.5 * t;
      }
    return gy.ldlt().solve(rhs);
  }

  double flag_curvature(const Eigen::VectorXd& y, const Eigen::VectorXd& u) const {
    const Eigen::VectorXd et = eta(y);
    const Eigen::MatrixXd n0 = n_matrix(y);
    // d/dt N_{y + t eta} at t = 0, centred differences with one Richardson step.
    const double h = 1e-3 * y.norm() / std::max(1.0, et.norm());
    auto diff = [&](double s) { return ((n_matrix(y + s * et) - n_matrix(y - s * et)) / (2.0 * s)).eval(); };
    const Eigen::MatrixXd dn = (4.0 * diff(0.5 * h) - diff(h)) / 3.0;

    const Eigen::VectorXd nu = n0 * u;
    const Eigen::VectorXd ru = dn * u - n0 * nu + n0 * a_.bracket(y, u) - a_.bracket(y, nu);
    const double den = g(y, y, y) * g(y, u, u) - std::pow(g(y, y, u), 2);
    return g(y, ru, u) / den;
  }

 private:
  D3 f2(const Eigen::VectorXd& y, const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Eigen::VectorXd& w) const {
    std::vector<D3> z(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      z[i].re.re = {y[i], w[i]};
      z[i].re.du = {v[i], 0.0};
      z[i].du.re = {u[i], 0.0};
    }
    D3 a2 = constant<D3>(0.0);
    D3 beta = constant<D3>(0.0);
    for (int i = 0; i < n_; ++i) {
      beta = beta + xg_[i] * z[i];
      for (int j = 0; j < n_; ++j) a2 = a2 + g_(i, j) * (z[i] * z[j]);
    }
    const D3 alpha = sqrt_of(a2);
    const D3 s = beta / alpha;
    D3 phi;
    switch (kind_) {
      case liftfinsler::PhiKind::Randers: phi = 1.0 + s; break;
      case liftfinsler::PhiKind::Matsumoto: phi = 1.0 / (1.0 - s); break;
      case liftfinsler::PhiKind::Kropina: phi = 1.0 / s; break;
      case liftfinsler::PhiKind::Custom: phi = constant<D3>(1.0); break;
    }
    const D3 f = alpha * phi;
    return f * f;
  }

  liftfinsler::LieAlgebra a_;
  Eigen::MatrixXd g_;
  Eigen::VectorXd xg_;
  liftfinsler::PhiKind kind_;
  int n_;
};

}  // namespace lftest
