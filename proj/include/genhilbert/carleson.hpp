#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genhilbert/measure.hpp"

namespace genhilbert {

enum class Verdict { Vanishing, NonVanishing, Inconclusive };

std::string to_string(Verdict v);

/// Points t_i with 1 - t_i geometric from `largest_gap` down to `smallest_gap`.
std::vector<double> geometric_t_grid(double largest_gap, double smallest_gap, int count);

struct CarlesonQuery {
  double exponent = 1.0;
  double log_order = 0.0;
  std::vector<double> t_grid;
};

struct CarlesonRow {
  double t = 0.0;
  double tail = 0.0;
  double ratio = 0.0;  // tail * log(2/(1-t))^log_order / (1-t)^exponent
};

/// Least-squares model log tail = log C + s log(1-t) - a log log(2/(1-t)).
/// With this sign convention a is the logarithmic order of the measure in
/// the Carleson sense: tail(t) log(2/(1-t))^a <= C (1-t)^s.
struct ExponentFit {
  double exponent = 0.0;
  double log_order = 0.0;
  double log_constant = 0.0;
  double rms_residual = 0.0;
};

struct CarlesonReport {
  double exponent = 0.0;
  double log_order = 0.0;
  /// Grid supremum of the ratio column; a lower bound for the true constant.
  double constant_sup = 0.0;
  std::vector<CarlesonRow> rows;
  Verdict verdict = Verdict::Inconclusive;
  /// Ratios increase over the last decade of the grid.
  bool growth_detected = false;
  std::optional<ExponentFit> fit;
};

CarlesonReport carleson_constant(const MeasureSpec& mu, const CarlesonQuery& query);

/// Throws DegenerateTail when the tail vanishes somewhere on the grid.
ExponentFit fit_exponent(const MeasureSpec& mu, std::span<const double> t_grid);

struct VanishingProbe {
  std::vector<double> r;
  /// sup over t >= r of tail(t) log(2/(1-t))^log_order / (1-t)^s.
  std::vector<double> sup;
  Verdict verdict = Verdict::Inconclusive;
};

VanishingProbe vanishing_probe(const MeasureSpec& mu, double s, std::span<const double> r_grid,
                               double log_order = 0.0);

/// Classify a nonincreasing sequence: below 10% of the initial value is
/// Vanishing, at least 90% is NonVanishing, anything between Inconclusive.
Verdict decay_verdict(std::span<const double> values);

enum class TheoremCase {
  T31_i,
  T31_ii,
  T31_iii,
  T41_necessary,
  T41_sufficient,
  T41_q1,
  T43_necessary,
  T43_sufficient,
  T401,
  T403,
};

std::string to_string(TheoremCase c);
TheoremCase theorem_case_from_string(const std::string& name);

struct ThresholdQuery {
  double p = 2.0;
  double q = 2.0;
  double alpha = 0.0;
  double beta = 2.0;
  TheoremCase theorem_case = TheoremCase::T41_necessary;
};

/// An s-Carleson condition, strengthened to log_order-logarithmic when
/// log_order > 0.
struct CarlesonCondition {
  double exponent = 0.0;
  double log_order = 0.0;
  bool is_logarithmic() const { return log_order != 0.0; }
};

/// Exponent of the Carleson condition in the selected theorem case. Pure
/// arithmetic in (p, q, alpha, beta); throws InvalidCase outside the
/// theorem's hypotheses.
CarlesonCondition threshold_exponent(const ThresholdQuery& query);

/// q / (q - 1) for q > 1.
double conjugate_index(double q);

}  // namespace genhilbert
