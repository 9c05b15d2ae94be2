#include "genhilbert/operator.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "genhilbert/parallel.hpp"

namespace genhilbert {

OperatorSpec::OperatorSpec(double beta, MeasureSpec measure, std::size_t order)
    : beta_(beta), measure_(std::move(measure)), order_(order) {
  if (!(beta > 0.0)) throw std::invalid_argument("operator beta must be positive");
  moments_ = parallel_map<double>(2 * order_ + 1, [&](std::size_t m) { return measure_.moment(m); });
  row_factors_ = gamma_ratio_sequence(order_, beta_);
}

double matrix_entry(const OperatorSpec& op, std::size_t n, std::size_t k) {
  if (n > op.order() || k > op.order()) throw std::out_of_range("matrix_entry: index beyond truncation order");
  return op.row_factor(n) * op.moments()[n + k];
}

TaylorPoly apply_matrix(const OperatorSpec& op, const TaylorPoly& f) {
  if (f.degree() > static_cast<long>(op.order())) {
    throw std::invalid_argument("apply_matrix: degree of f exceeds the truncation order");
  }
  const std::size_t n_out = op.order() + 1;
  const auto& mu = op.moments();
  const auto& a = f.coeffs();
  std::vector<cplx> b = parallel_map<cplx>(n_out, [&](std::size_t n) {
    cplx sum{};
    for (std::size_t k = 0; k < a.size(); ++k) sum += mu[n + k] * a[k];
    return op.row_factor(n) * sum;
  });
  return TaylorPoly(std::move(b));
}

TaylorPoly apply_coefficient(const OperatorSpec& op, const TaylorPoly& f, double tol) {
  if (f.degree() > static_cast<long>(op.order())) {
    throw std::invalid_argument("apply_coefficient: degree of f exceeds the truncation order");
  }
  std::vector<cplx> b = parallel_map<cplx>(op.order() + 1, [&](std::size_t n) {
    const double nn = static_cast<double>(n);
    auto integrand = [&](double t) -> cplx { return (n == 0 ? 1.0 : std::pow(t, nn)) * f.evaluate(t); };
    return op.row_factor(n) * op.measure().integrate(integrand, tol, 4000);
  });
  return TaylorPoly(std::move(b));
}

cplx apply_integral(const OperatorSpec& op, const TaylorPoly& f, cplx z, double tol) {
  return apply_integral_fn(op, [&](double t) { return f.evaluate(t); }, z, tol);
}

std::vector<double> gate_exponents(double p, double alpha) {
  if (!(p > 0.0) || !(alpha > -1.0)) throw std::invalid_argument("gate: need p > 0, alpha > -1");
  std::vector<double> out;
  if (p <= 1.0) out.push_back((alpha + 2.0) / p);
  if (p >= 1.0 && p <= 2.0) out.push_back((alpha + 2.0 - (p - 1.0) * (p - 1.0)) / p);
  if (p >= 2.0) out.push_back((alpha + 1.0) / p);
  // Weaker requirement first.
  std::sort(out.begin(), out.end());
  return out;
}

GateResult well_definedness_gate(const MeasureSpec& mu, double p, double alpha) {
  GateResult result;
  result.exponents_tried = gate_exponents(p, alpha);
  const std::vector<double> grid = geometric_t_grid(1.0, 1e-8, 81);
  for (double s : result.exponents_tried) {
    CarlesonReport report = carleson_constant(mu, CarlesonQuery{s, 0.0, grid});
    // Rows are spaced ten per decade; compare the last row with the row two decades earlier.
    const auto& rows = report.rows;
    const double last = rows.back().ratio;
    const double earlier = rows[rows.size() - 21].ratio;
    double growth = 0.0;
    if (!std::isfinite(last)) {
      growth = std::numeric_limits<double>::infinity();
    } else if (earlier > 0.0) {
      growth = last / earlier;
    } else if (last > 0.0) {
      growth = std::numeric_limits<double>::infinity();
    }
    result.growth.push_back(growth);
    const bool pass = std::isfinite(report.constant_sup) && growth <= 1.05;
    if (pass && !result.pass) {
      result.pass = true;
      result.exponent = s;
      result.report = std::move(report);
    } else if (!result.pass && result.report.rows.empty()) {
      result.exponent = s;
      result.report = std::move(report);
    }
  }
  return result;
}

MatrixApplication apply_matrix_checked(const OperatorSpec& op, const TaylorPoly& f, double p, double alpha) {
  MatrixApplication out;
  out.gate = well_definedness_gate(op.measure(), p, alpha);
  out.well_definedness_warning = !out.gate.pass;
  out.result = apply_matrix(op, f);
  return out;
}

}  // namespace genhilbert
