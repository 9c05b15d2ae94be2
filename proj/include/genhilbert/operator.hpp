#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "genhilbert/carleson.hpp"
#include "genhilbert/gamma_ratio.hpp"
#include "genhilbert/measure.hpp"
#include "genhilbert/taylor.hpp"

namespace genhilbert {

/// H_{mu,beta} truncated at order N, with the moments mu_0..mu_{2N} cached.
/// Matrix entries are gamma_ratio(n, beta) * mu_{n+k}.
class OperatorSpec {
 public:
  OperatorSpec(double beta, MeasureSpec measure, std::size_t order);

  double beta() const { return beta_; }
  const MeasureSpec& measure() const { return measure_; }
  std::size_t order() const { return order_; }
  const std::vector<double>& moments() const { return moments_; }
  /// gamma_ratio(n, beta) for n <= order.
  double row_factor(std::size_t n) const { return row_factors_.at(n); }

 private:
  double beta_;
  MeasureSpec measure_;
  std::size_t order_;
  std::vector<double> moments_;
  std::vector<double> row_factors_;
};

double matrix_entry(const OperatorSpec& op, std::size_t n, std::size_t k);

/// b_n = gamma_ratio(n, beta) sum_k mu_{n+k} a_k for n <= N. Requires deg f <= N.
TaylorPoly apply_matrix(const OperatorSpec& op, const TaylorPoly& f);

/// b_n = gamma_ratio(n, beta) times the integral of t^n f(t) dmu(t).
TaylorPoly apply_coefficient(const OperatorSpec& op, const TaylorPoly& f, double tol = 1e-12);

/// Integral of f(t) (1 - t z)^(-beta) dmu(t) for any callable f on [0, 1).
template <class F>
cplx apply_integral_fn(const OperatorSpec& op, F&& f, cplx z, double tol = 1e-12) {
  if (!(std::abs(z) < 1.0)) throw std::invalid_argument("apply_integral: need |z| < 1");
  const double beta = op.beta();
  auto kernel = [&](double t) -> cplx {
    return static_cast<cplx>(f(t)) * std::exp(-beta * std::log(1.0 - t * z));
  };
  return op.measure().integrate(kernel, tol, 4000);
}

/// Derivative in z of the integral form: beta times the integral of
/// t f(t) (1 - t z)^(-beta - 1) dmu(t).
template <class F>
cplx apply_integral_derivative_fn(const OperatorSpec& op, F&& f, cplx z, double tol = 1e-12) {
  if (!(std::abs(z) < 1.0)) throw std::invalid_argument("apply_integral: need |z| < 1");
  const double beta = op.beta();
  auto kernel = [&](double t) -> cplx {
    return static_cast<cplx>(f(t)) * t * std::exp(-(beta + 1.0) * std::log(1.0 - t * z));
  };
  return beta * op.measure().integrate(kernel, tol, 4000);
}

cplx apply_integral(const OperatorSpec& op, const TaylorPoly& f, cplx z, double tol = 1e-12);

/// Outcome of the well-definedness check: the measure is tested against the
/// Carleson exponent attached to p (two exponents at p = 1 and p = 2, either
/// sufficing).
struct GateResult {
  bool pass = false;
  /// Exponent that passed, or the smallest one tried on failure.
  double exponent = 0.0;
  std::vector<double> exponents_tried;
  /// Largest ratio growth over the last two decades of 1 - t, per exponent.
  std::vector<double> growth;
  CarlesonReport report;
};

/// Exponents attached to p: (alpha+2)/p for p <= 1, (alpha+2-(p-1)^2)/p for
/// 1 <= p <= 2, (alpha+1)/p for p >= 2.
std::vector<double> gate_exponents(double p, double alpha);

GateResult well_definedness_gate(const MeasureSpec& mu, double p, double alpha);

struct MatrixApplication {
  TaylorPoly result;
  bool well_definedness_warning = false;
  GateResult gate;
};

/// apply_matrix plus the advisory gate for f taken in A^p_alpha.
MatrixApplication apply_matrix_checked(const OperatorSpec& op, const TaylorPoly& f, double p, double alpha);

}  // namespace genhilbert
