#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <type_traits>
#include <vector>

#include "genhilbert/quadrature.hpp"

namespace genhilbert {

using cplx = std::complex<double>;

/// Point mass `weight` at `location` in [0, 1).
struct Atom {
  double location = 0.0;
  double weight = 1.0;
};

/// Density scale * (1 - t)^power * (log(2 / (1 - t)))^log_power on (cutoff, 1).
struct DensityTerm {
  double scale = 1.0;
  double power = 0.0;
  double log_power = 0.0;
  double cutoff = 0.0;

  bool has_log() const { return log_power != 0.0; }
};

/// log(2 / (1 - t)), the logarithmic weight used throughout.
inline double log_weight(double t) { return std::numbers::ln2 - std::log1p(-t); }

/// Positive finite Borel measure on [0, 1): finitely many atoms plus a finite
/// mixture of power/log-power densities. Immutable after construction;
/// copies share a thread-safe moment cache for the log-power terms.
class MeasureSpec {
 public:
  /// The zero measure.
  MeasureSpec();
  MeasureSpec(std::vector<Atom> atoms, std::vector<DensityTerm> densities);

  static MeasureSpec lebesgue();
  static MeasureSpec atom(double location, double weight = 1.0);
  /// Density s (1 - t)^(s - 1); tail is exactly (1 - t)^s.
  static MeasureSpec power_family(double s);
  /// Density s (1 - t)^(s - 1) log(2/(1-t))^delta.
  static MeasureSpec log_power_family(double s, double delta);
  /// Tail exactly (1 - t)^s / log(2/(1-t)): the model 1-logarithmic
  /// s-Carleson measure.
  static MeasureSpec log_carleson_family(double s);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityTerm>& densities() const { return densities_; }
  bool is_zero() const { return atoms_.empty() && densities_.empty(); }

  double total_mass() const { return tail(0.0); }

  /// Integral of t^n against the measure.
  double moment(std::size_t n) const;
  /// mu([t, 1)).
  double tail(double t) const;

  /// Integral of phi against the measure. `tol` is relative to the integral
  /// of |phi| over each density component; atoms contribute exactly.
  template <class F>
  auto integrate(F&& phi, double tol = 1e-10, int max_intervals = 2000) const;

  /// Restriction to (r, 1): drops atoms at or below r and raises cutoffs.
  MeasureSpec truncate_tail(double r) const;

  MeasureSpec operator+(const MeasureSpec& other) const;
  MeasureSpec scaled(double factor) const;

 private:
  struct MomentCache;

  double density_moment(std::size_t term, std::size_t n) const;

  std::vector<Atom> atoms_;
  std::vector<DensityTerm> densities_;
  std::shared_ptr<MomentCache> cache_;
};

namespace detail {

/// Integral of phi against one density term in the variable u = -log(1 - t).
/// The change of variables turns the endpoint behaviour (1 - t)^power into
/// exp(-(power + 1) u), which decays on [u_cut, inf).
inline constexpr double kBelowOne = 1.0 - 0x1p-53;

template <class T, class F>
T integrate_density(const DensityTerm& d, F& phi, double tol, int max_intervals) {
  const double decay = d.power + 1.0;
  const double u_cut = -std::log1p(-d.cutoff);
  auto integrand = [&](double u) -> T {
    double log_w = std::log(d.scale) - decay * u;
    if (d.log_power != 0.0) log_w += d.log_power * std::log(std::numbers::ln2 + u);
    if (log_w < -745.0) return T{};
    // Past u ~ 37 the map rounds to t = 1; stay on the open interval.
    const double t = std::min(-std::expm1(-u), kBelowOne);
    return static_cast<T>(phi(t)) * std::exp(log_w);
  };
  quad::AdaptiveOptions opt;
  opt.rel_tol = tol;
  opt.max_intervals = max_intervals;
  const double scale = std::max(1.0, 1.0 / decay);
  return quad::gauss_kronrod_halfline<T>(integrand, u_cut, scale, opt).value;
}

}  // namespace detail

template <class F>
auto MeasureSpec::integrate(F&& phi, double tol, int max_intervals) const {
  using Raw = std::decay_t<decltype(phi(0.0))>;
  using T = std::conditional_t<std::is_same_v<Raw, cplx>, cplx, double>;
  T sum{};
  for (const auto& a : atoms_) sum += static_cast<T>(phi(a.location)) * a.weight;
  for (const auto& d : densities_) sum += detail::integrate_density<T>(d, phi, tol, max_intervals);
  return sum;
}

}  // namespace genhilbert
