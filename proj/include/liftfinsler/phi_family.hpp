#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liftfinsler/errors.hpp"
#include "liftfinsler/validation.hpp"

namespace liftfinsler {

enum class PhiKind { Randers, Kropina, Matsumoto, Custom };

inline const char* to_string(PhiKind k) {
  switch (k) {
    case PhiKind::Randers: return "randers";
    case PhiKind::Kropina: return "kropina";
    case PhiKind::Matsumoto: return "matsumoto";
    case PhiKind::Custom: return "custom";
  }
  return "custom";
}

/// Polynomial coefficients (lowest degree first) describing a custom phi.
struct PhiPolynomial {
  std::vector<double> phi;
  std::vector<double> dphi;
  std::vector<double> d2phi;
};

/// The profile function phi(s) of an (alpha,beta)-metric F = alpha phi(beta/alpha).
class PhiFamily {
 public:
  using Fn = std::function<double(double)>;

  static PhiFamily randers() {
    return PhiFamily(PhiKind::Randers, "randers", [](double s) { return 1.0 + s; }, [](double) { return 1.0; },
                     [](double) { return 0.0; }, 1.0, {});
  }

  /// phi(s) = 1/s, defined only on the half-cone s > 0.
  static PhiFamily kropina() {
    return PhiFamily(PhiKind::Kropina, "kropina", [](double s) { return 1.0 / s; },
                     [](double s) { return -1.0 / (s * s); }, [](double s) { return 2.0 / (s * s * s); },
                     std::numeric_limits<double>::infinity(), {0.0});
  }

  static PhiFamily matsumoto() {
    return PhiFamily(PhiKind::Matsumoto, "matsumoto", [](double s) { return 1.0 / (1.0 - s); },
                     [](double s) { return 1.0 / ((1.0 - s) * (1.0 - s)); },
                     [](double s) { return 2.0 / ((1.0 - s) * (1.0 - s) * (1.0 - s)); }, 1.0, {1.0});
  }

  static PhiFamily custom(std::string name, Fn phi, Fn dphi, Fn d2phi, double b0 = std::numeric_limits<double>::infinity(),
                          std::vector<double> singular_at = {}) {
    return PhiFamily(PhiKind::Custom, std::move(name), std::move(phi), std::move(dphi), std::move(d2phi), b0,
                     std::move(singular_at));
  }

  static PhiFamily polynomial(PhiPolynomial coeffs, double b0 = std::numeric_limits<double>::infinity()) {
    auto eval = [](std::vector<double> c) {
      return [c = std::move(c)](double s) {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
        return acc;
      };
    };
    PhiFamily p = custom("polynomial", eval(coeffs.phi), eval(coeffs.dphi), eval(coeffs.d2phi), b0);
    p.polynomial_ = std::move(coeffs);
    return p;
  }

  /// phi = 1: the Riemannian metric alpha itself.
  static PhiFamily riemannian() {
    PhiFamily p = polynomial({{1.0}, {0.0}, {0.0}});
    p.name_ = "riemannian";
    p.riemannian_ = true;
    return p;
  }

  PhiKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double b0() const noexcept { return b0_; }
  const std::vector<double>& singular_at() const noexcept { return singular_at_; }
  const std::optional<PhiPolynomial>& polynomial_coefficients() const noexcept { return polynomial_; }
  bool is_riemannian() const noexcept { return riemannian_; }

  bool defined_at(double s) const {
    if (!std::isfinite(s)) return false;
    switch (kind_) {
      case PhiKind::Kropina: return s > 0.0;
      case PhiKind::Matsumoto: return s < 1.0;
      case PhiKind::Randers: return s > -1.0;
      case PhiKind::Custom: break;
    }
    if (std::isfinite(b0_) && std::abs(s) >= b0_) return false;
    return std::none_of(singular_at_.begin(), singular_at_.end(), [&](double p) { return s == p; });
  }

  double phi(double s) const { return eval(phi_, s); }
  double dphi(double s) const { return eval(dphi_, s); }
  double d2phi(double s) const { return eval(d2phi_, s); }

  /// D(s) = phi''(s) / (phi(s) - s phi'(s)).
  double D(double s) const {
    const double den = phi(s) - s * dphi(s);
    if (den == 0.0) throw UndefinedMetricError("D(s): phi - s phi' vanishes at s = " + std::to_string(s));
    return d2phi(s) / den;
  }

  /// phi(s) - s phi'(s) + (b^2 - s^2) phi''(s).
  double validity_expression(double s, double b) const { return phi(s) - s * dphi(s) + (b * b - s * s) * d2phi(s); }

  /// Cross-checks dphi and d2phi against centered differences of phi at
  /// `samples` points of the domain.
  ValidationReport check_derivatives(int samples = 20, double tol = 1e-6) const {
    const double half = std::isfinite(b0_) ? 0.9 * b0_ : 2.0;
    double worst1 = 0.0;
    double worst2 = 0.0;
    int used = 0;
    for (int i = 0; i < samples; ++i) {
      double s = -half + (2.0 * half) * (i + 0.5) / samples;
      if (kind_ == PhiKind::Kropina && s <= 0.0) s = 0.1 + std::abs(s);
      const double h1 = 1e-5;
      const double h2 = 1e-4;
      if (!defined_at(s - h2) || !defined_at(s + h2) || near_singular(s, 1e-3)) continue;
      const double fd1 = (phi(s + h1) - phi(s - h1)) / (2.0 * h1);
      const double fd2 = (phi(s + h2) - 2.0 * phi(s) + phi(s - h2)) / (h2 * h2);
      worst1 = std::max(worst1, std::abs(fd1 - dphi(s)) / std::max(1.0, std::abs(dphi(s))));
      worst2 = std::max(worst2, std::abs(fd2 - d2phi(s)) / std::max(1.0, std::abs(d2phi(s))));
      ++used;
    }
    ValidationReport r;
    r.checks.push_back({"dphi_consistency", worst1, tol, worst1 <= tol && used > 0, "dphi vs centered difference of phi"});
    r.checks.push_back({"d2phi_consistency", worst2, tol, worst2 <= tol && used > 0, "d2phi vs second difference of phi"});
    return r;
  }

 private:
  PhiFamily(PhiKind kind, std::string name, Fn phi, Fn dphi, Fn d2phi, double b0, std::vector<double> singular)
      : kind_(kind),
        name_(std::move(name)),
        phi_(std::move(phi)),
        dphi_(std::move(dphi)),
        d2phi_(std::move(d2phi)),
        b0_(b0),
        singular_at_(std::move(singular)) {}

  double eval(const Fn& f, double s) const {
    if (!defined_at(s)) throw UndefinedMetricError(name_ + " profile is not defined at s = " + std::to_string(s));
    return f(s);
  }

  bool near_singular(double s, double margin) const {
    return std::any_of(singular_at_.begin(), singular_at_.end(), [&](double p) { return std::abs(s - p) < margin; });
  }

  PhiKind kind_;
  std::string name_;
  Fn phi_, dphi_, d2phi_;
  double b0_;
  std::vector<double> singular_at_;
  std::optional<PhiPolynomial> polynomial_;
  bool riemannian_ = false;
};

}  // namespace liftfinsler
