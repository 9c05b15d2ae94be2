#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "genhilbert/errors.hpp"

namespace genhilbert::quad {

struct AdaptiveOptions {
  /// Stop once the error estimate is below rel_tol * integral of |f|.
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 2000;
  /// Uniform pieces the range is split into before adaptive refinement.
  int initial_pieces = 8;
};

template <class T>
struct Estimate {
  T value{};
  double error = 0.0;
  /// Integral of |f| over the range, used as the relative-tolerance scale.
  double magnitude = 0.0;
  int intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude_of(double v) { return std::abs(v); }
inline double magnitude_of(const std::complex<double>& v) { return std::abs(v); }
inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class T>
struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  T value{};
  double error = 0.0;
  double magnitude = 0.0;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class T, class F>
Panel<T> kronrod15(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const T fc = f(center);
  if (!finite(fc)) throw NonConvergent("integrand is not finite at " + std::to_string(center));
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  double mag = magnitude_of(fc) * kKronrodWeights[7];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    if (!finite(f1) || !finite(f2)) {
      throw NonConvergent("integrand is not finite near " + std::to_string(center));
    }
    kronrod += (f1 + f2) * kKronrodWeights[j];
    mag += (magnitude_of(f1) + magnitude_of(f2)) * kKronrodWeights[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kGaussWeights[j / 2];
  }
  Panel<T> p;
  p.lo = lo;
  p.hi = hi;
  p.value = kronrod * half;
  p.error = magnitude_of((kronrod - gauss) * half);
  p.magnitude = mag * std::abs(half);
  return p;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Throws NonConvergent when max_intervals is exhausted before the
/// error estimate drops below max(abs_tol, rel_tol * magnitude).
template <class T, class F>
Estimate<T> gauss_kronrod(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
  Estimate<T> out;
  if (!(b > a)) return out;
  std::priority_queue<detail::Panel<T>> heap;
  const int pieces = std::max(1, opt.initial_pieces);
  T total{};
  double total_error = 0.0;
  double total_mag = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * i / pieces;
    const double hi = (i + 1 == pieces) ? b : a + (b - a) * (i + 1) / pieces;
    auto p = detail::kronrod15<T>(f, lo, hi);
    total += p.value;
    total_error += p.error;
    total_mag += p.magnitude;
    heap.push(p);
  }
  auto converged = [&] {
    return total_error <= std::max(opt.abs_tol, opt.rel_tol * total_mag);
  };
  int count = pieces;
  while (!converged()) {
    if (count >= opt.max_intervals) {
      throw NonConvergent("adaptive quadrature exceeded " + std::to_string(opt.max_intervals) +
                          " intervals (error " + std::to_string(total_error) + ", scale " +
                          std::to_string(total_mag) + ")");
    }
    auto worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) < 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) {
      throw NonConvergent("adaptive quadrature cannot bisect further near " + std::to_string(mid));
    }
    heap.pop();
    auto left = detail::kronrod15<T>(f, worst.lo, mid);
    auto right = detail::kronrod15<T>(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_mag += left.magnitude + right.magnitude - worst.magnitude;
    heap.push(left);
    heap.push(right);
    ++count;
    // Running sums drift; resynchronize occasionally.
    if (count % 256 == 0) {
      auto copy = heap;
      total = T{};
      total_error = 0.0;
      total_mag = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        total_mag += copy.top().magnitude;
        copy.pop();
      }
    }
  }
  // Final value summed in a fixed order (by left endpoint) for reproducibility.
  std::vector<detail::Panel<T>> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
  for (const auto& p : panels) {
    out.value += p.value;
    out.error += p.error;
    out.magnitude += p.magnitude;
  }
  out.intervals = count;
  return out;
}

/// Integral of f over [a, inf) via u = a + scale * v / (1 - v), v in [0, 1).
template <class T, class F>
Estimate<T> gauss_kronrod_halfline(F&& f, double a, double scale, const AdaptiveOptions& opt = {}) {
  auto mapped = [&](double v) -> T {
    const double gap = 1.0 - v;
    if (gap <= 0.0) return T{};
    const double u = a + scale * v / gap;
    const T fu = f(u);
    if (fu == T{}) return T{};
    return fu * (scale / (gap * gap));
  };
  return gauss_kronrod<T>(mapped, 0.0, 1.0, opt);
}

/// Gauss rule on [0, 1] for the weight (1 - x)^a x^b, a, b > -1.
/// Weights sum to B(a + 1, b + 1).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double weight_exponent_a = 0.0;
  double weight_exponent_b = 0.0;
  std::size_t size() const { return nodes.size(); }
};

GaussRule gauss_jacobi_unit(std::size_t n, double a, double b = 0.0);

/// Shared, thread-safe cache of gauss_jacobi_unit rules.
const GaussRule& cached_gauss_jacobi_unit(std::size_t n, double a, double b = 0.0);

}  // namespace genhilbert::quad
