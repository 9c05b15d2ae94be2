#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "genhilbert/disk_quadrature.hpp"
#include "genhilbert/taylor.hpp"
#include "genhilbert/test_functions.hpp"

namespace genhilbert {

enum class SpaceKind { Bergman, Dirichlet, Bloch };

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

/// A^p_alpha, D^p_alpha or the Bloch space (p and alpha unused).
struct SpaceParams {
  SpaceKind kind = SpaceKind::Bergman;
  double p = 2.0;
  double alpha = 0.0;

  void validate() const;
};

/// (alpha + 1) times the integral of |F|^p (1 - |z|^2)^alpha dA.
template <class F>
double weighted_lp_integral(F&& f, double p, double alpha, const QuadratureGrid& grid, cplx center = {}) {
  auto integrand = [&](cplx z) { return std::pow(std::abs(f(z)), p); };
  return (alpha + 1.0) * disk_integral<double>(integrand, alpha, grid, center).value;
}

/// A^p_alpha norm of an arbitrary analytic function given pointwise.
template <class F>
double bergman_norm_of(F&& f, double p, double alpha, const QuadratureGrid& grid, cplx center = {}) {
  if (!(p > 0.0) || !(alpha > -1.0)) throw std::invalid_argument("bergman norm needs p > 0, alpha > -1");
  return std::pow(weighted_lp_integral(f, p, alpha, grid, center), 1.0 / p);
}

double bergman_norm(const TaylorPoly& f, double p, double alpha, const QuadratureGrid& grid = {});
/// |f(0)| + ||f'||_{A^p_alpha}.
double dirichlet_norm(const TaylorPoly& f, double p, double alpha, const QuadratureGrid& grid = {});
/// |f(0)| + grid supremum of (1 - |z|^2)|f'(z)|; a lower bound for the true value.
double bloch_norm(const TaylorPoly& f, const QuadratureGrid& grid = {});

/// Closed-form variants; `center` recentres the disk quadrature.
double bergman_norm(const TestFunction& f, double p, double alpha, const QuadratureGrid& grid,
                    cplx center = {});
double dirichlet_norm(const TestFunction& f, double p, double alpha, const QuadratureGrid& grid,
                      cplx center = {});
double bloch_norm(const TestFunction& f, const QuadratureGrid& grid = {});
/// Norm of a closed-form function in the given space.
double space_norm(const SpaceParams& space, const TestFunction& f, const QuadratureGrid& grid,
                  cplx center = {});

/// Norm in the given space (Bloch ignores p and alpha).
double space_norm(const SpaceParams& space, const TaylorPoly& f, const QuadratureGrid& grid = {});

/// Radii used for Bloch suprema: the grid's radial nodes plus 1 - r
/// geometric from 1 down to 1e-6.
std::vector<double> bloch_radii(const QuadratureGrid& grid);

/// Coefficient growth diagnostics. For p <= 1 the ratios are
/// |a_n| / n^((alpha+2)/p - 1), otherwise |a_n| / n^((alpha+1)/p); the partial
/// sums are of n^(p - alpha - 3) |a_n|^p. Only trends are reported.
struct CoeffDecayReport {
  double ratio_exponent = 0.0;
  std::vector<double> ratios;        // n = 1..N
  std::vector<double> partial_sums;  // n = 1..N
  bool enough_terms = false;
  /// Mean ratio over the last quarter is below that over the second quarter.
  bool ratios_decreasing = false;
  /// The second half of the partial sum adds at most 1e-3 of the total.
  bool partial_sums_settle = false;
  /// Set when neither trend indicates decay.
  bool non_decay_flag = false;
};

CoeffDecayReport coeff_decay_report(const TaylorPoly& f, double p, double alpha);

}  // namespace genhilbert
