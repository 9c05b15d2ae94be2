#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "genhilbert/errors.hpp"
#include "genhilbert/parallel.hpp"
#include "genhilbert/quadrature.hpp"

namespace genhilbert {

using cplx = std::complex<double>;

/// Product rule on the disk: Gauss-Jacobi in x = |z|^2 carrying the weight
/// (1 - x)^w, uniform trapezoid in the angle.
struct QuadratureGrid {
  std::size_t radial = 160;
  /// Number of uniform angles; must be a power of two.
  std::size_t angular = 1024;
  /// Largest relative change tolerated when the angular count is halved or
  /// the radial rule refined.
  double richardson_tol = 1e-6;
  bool self_check = true;

  void validate() const;
};

template <class T>
struct DiskEstimate {
  T value{};
  /// The same integral of |F|; scale for relative comparisons.
  double magnitude = 0.0;
  /// Relative difference observed by the self-check (0 when disabled).
  double check_difference = 0.0;
};

namespace detail {

template <class T>
struct DiskPass {
  T full{};
  T half{};
  double magnitude = 0.0;
};

std::vector<cplx> unit_roots(std::size_t count);

template <class T, class F>
DiskPass<T> disk_pass(F& f, double w, std::size_t radial, std::size_t angular, cplx center) {
  const quad::GaussRule& rule = quad::cached_gauss_jacobi_unit(radial, w, 0.0);
  const std::vector<cplx> roots = unit_roots(angular);
  const bool recentred = center != cplx{};
  const double c2 = std::norm(center);
  auto node = [&](std::size_t j) {
    const double r = std::sqrt(rule.nodes[j]);
    DiskPass<T> acc;
    for (std::size_t k = 0; k < angular; ++k) {
      const cplx zeta = r * roots[k];
      T value;
      double scale = 1.0;
      if (recentred) {
        const cplx denom = 1.0 - std::conj(center) * zeta;
        scale = std::pow((1.0 - c2) / std::norm(denom), w + 2.0);
        value = static_cast<T>(f((center - zeta) / denom)) * scale;
      } else {
        value = static_cast<T>(f(zeta));
      }
      acc.full += value;
      if (k % 2 == 0) acc.half += value;
      acc.magnitude += std::abs(value);
    }
    const double weight = rule.weights[j];
    acc.full *= weight / static_cast<double>(angular);
    acc.half *= weight / static_cast<double>(angular / 2);
    acc.magnitude *= weight / static_cast<double>(angular);
    return acc;
  };
  const auto per_node = parallel_map<DiskPass<T>>(rule.size(), node);
  DiskPass<T> total;
  for (const auto& p : per_node) {
    total.full += p.full;
    total.half += p.half;
    total.magnitude += p.magnitude;
  }
  return total;
}

}  // namespace detail

/// Integral over the disk of F(z) (1 - |z|^2)^w dA(z), with dA normalized to
/// total area 1. A nonzero `center` substitutes z = (c - u)/(1 - conj(c) u),
/// which concentrates nodes near c. Throws GridTooCoarse when the self-check
/// fails.
template <class T, class F>
DiskEstimate<T> disk_integral(F&& f, double w, const QuadratureGrid& grid, cplx center = {}) {
  grid.validate();
  if (!(w > -1.0)) throw std::invalid_argument("disk_integral: weight exponent must exceed -1");
  if (!(std::abs(center) < 1.0)) throw std::invalid_argument("disk_integral: center must lie in the disk");
  const auto base = detail::disk_pass<T>(f, w, grid.radial, grid.angular, center);
  DiskEstimate<T> out;
  out.value = base.full;
  out.magnitude = base.magnitude;
  if (!grid.self_check) return out;
  const std::size_t refined = grid.radial + std::max<std::size_t>(2, grid.radial / 4);
  const auto fine = detail::disk_pass<T>(f, w, refined, grid.angular, center);
  const double scale = std::max(base.magnitude, 1e-300);
  const double diff = std::max(std::abs(base.full - base.half), std::abs(base.full - fine.full)) / scale;
  out.check_difference = base.magnitude == 0.0 ? 0.0 : diff;
  if (out.check_difference > grid.richardson_tol) {
    throw GridTooCoarse("disk quadrature self-check differs by " + std::to_string(out.check_difference) +
                        " (radial " + std::to_string(grid.radial) + ", angular " +
                        std::to_string(grid.angular) + ")");
  }
  return out;
}

}  // namespace genhilbert
