#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "genhilbert/carleson.hpp"
#include "genhilbert/errors.hpp"

using namespace genhilbert;

TEST_CASE("carleson_constant examples") {
  const auto grid = geometric_t_grid(1.0, 1e-8, 81);
  const CarlesonReport mu2 = carleson_constant(MeasureSpec::power_family(2.0), {2.0, 0.0, grid});
  CHECK(mu2.constant_sup == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& row : mu2.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-9));

  const CarlesonReport leb = carleson_constant(MeasureSpec::lebesgue(), {1.0, 0.0, grid});
  CHECK(leb.constant_sup == doctest::Approx(1.0).epsilon(1e-12));

  const CarlesonReport wrong = carleson_constant(MeasureSpec::lebesgue(), {2.0, 0.0, grid});
  CHECK(wrong.growth_detected);
  CHECK(wrong.verdict != Verdict::Vanishing);
  CHECK(wrong.constant_sup == doctest::Approx(wrong.rows.back().ratio));
  CHECK(wrong.constant_sup == doctest::Approx(1.0 / (1.0 - grid.back())).epsilon(1e-6));
}

TEST_CASE("power family ratios are flat at s, increasing below, decreasing above") {
  const auto grid = geometric_t_grid(1.0, 1e-8, 41);
  for (double s : {0.5, 1.0, 2.0, 3.0}) {
    const MeasureSpec mu = MeasureSpec::power_family(s);
    CHECK(carleson_constant(mu, {s, 0.0, grid}).constant_sup == doctest::Approx(1.0).epsilon(1e-9));
    const auto below = carleson_constant(mu, {s - 0.1, 0.0, grid}).rows;
    const auto above = carleson_constant(mu, {s + 0.1, 0.0, grid}).rows;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      CHECK(below[i].ratio < below[i - 1].ratio);
      CHECK(above[i].ratio > above[i - 1].ratio);
    }
  }
}

TEST_CASE("constant_sup is the maximum of the ratio table") {
  const auto grid = geometric_t_grid(0.5, 1e-6, 30);
  const MeasureSpec mu = MeasureSpec::atom(0.4) + MeasureSpec::log_power_family(1.5, 1.0);
  const CarlesonReport r = carleson_constant(mu, {1.2, 0.5, grid});
  double best = 0.0;
  for (const auto& row : r.rows) best = std::max(best, row.ratio);
  CHECK(r.constant_sup == best);
  for (const auto& row : r.rows) {
    CHECK(row.ratio == doctest::Approx(row.tail * std::pow(log_weight(row.t), 0.5) / std::pow(1.0 - row.t, 1.2)));
  }
}

TEST_CASE("fit_exponent examples") {
  const auto grid = geometric_t_grid(1e-2, 1e-6, 40);
  const ExponentFit three = fit_exponent(MeasureSpec::power_family(3.0), grid);
  CHECK(std::abs(three.exponent - 3.0) < 0.05);
  CHECK(std::abs(three.log_order) < 0.1);
  CHECK(std::abs(fit_exponent(MeasureSpec::lebesgue(), grid).exponent - 1.0) < 0.05);
  CHECK_THROWS_AS(fit_exponent(MeasureSpec::atom(0.9), geometric_t_grid(0.5, 1e-3, 10)), DegenerateTail);
}

TEST_CASE("fit_exponent recovers the log order of the log-Carleson family") {
  const ExponentFit fit = fit_exponent(MeasureSpec::log_carleson_family(2.0), geometric_t_grid(1e-2, 1e-6, 40));
  CHECK(fit.exponent == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fit.log_order == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("vanishing_probe examples") {
  std::vector<double> r_grid{0.0};
  for (int i = 1; i <= 12; ++i) r_grid.push_back(1.0 - std::pow(10.0, -i / 3.0));
  const MeasureSpec fast({}, {DensityTerm{1.0, 1.5, 0.0, 0.0}});
  const VanishingProbe v = vanishing_probe(fast, 2.0, r_grid);
  CHECK(v.verdict == Verdict::Vanishing);
  // tail = (1-t)^2.5 / 2.5, so the ratio at t >= r peaks at t = r.
  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    CHECK(v.sup[i] == doctest::Approx(std::sqrt(1.0 - r_grid[i]) / 2.5).epsilon(1e-9));
  }
  const VanishingProbe flat = vanishing_probe(MeasureSpec::power_family(2.0), 2.0, r_grid);
  CHECK(flat.verdict == Verdict::NonVanishing);
  for (double x : flat.sup) CHECK(x == doctest::Approx(1.0).epsilon(1e-9));
  const VanishingProbe zero = vanishing_probe(MeasureSpec(), 2.0, r_grid);
  CHECK(zero.verdict == Verdict::Vanishing);
  for (double x : zero.sup) CHECK(x == 0.0);
}

TEST_CASE("decay_verdict thresholds") {
  const std::vector<double> a{1.0, 0.5, 0.05};
  const std::vector<double> b{1.0, 0.95, 0.92};
  const std::vector<double> c{1.0, 0.5, 0.4};
  CHECK(decay_verdict(a) == Verdict::Vanishing);
  CHECK(decay_verdict(b) == Verdict::NonVanishing);
  CHECK(decay_verdict(c) == Verdict::Inconclusive);
}

TEST_CASE("threshold_exponent quoted values") {
  CHECK(threshold_exponent({2.0, 2.0, 0.0, 2.0, TheoremCase::T41_necessary}).exponent == doctest::Approx(2.0));
  CHECK(threshold_exponent({1.5, 1.5, 0.0, 2.0, TheoremCase::T31_ii}).exponent == doctest::Approx(7.0 / 6.0));
  const CarlesonCondition q1 = threshold_exponent({1.0, 1.0, 0.0, 2.0, TheoremCase::T41_q1});
  CHECK(q1.exponent == doctest::Approx(2.0));
  CHECK(q1.log_order == doctest::Approx(1.0));
  CHECK(q1.is_logarithmic());
}

TEST_CASE("threshold_exponent rejects parameters outside the hypotheses") {
  CHECK_THROWS_AS(threshold_exponent({2.0, 1.0, 0.0, 2.0, TheoremCase::T41_necessary}), InvalidCase);
  CHECK_THROWS_AS(threshold_exponent({2.0, 3.0, 0.0, 0.5, TheoremCase::T41_necessary}), InvalidCase);
  CHECK_THROWS_AS(threshold_exponent({3.0, 3.0, 0.0, 2.0, TheoremCase::T31_ii}), InvalidCase);
}

TEST_CASE("sufficient exponent dominates the necessary one") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const double p = 1.01 + 4.0 * u(rng);
    const double q = p + 4.0 * u(rng);
    const double alpha = -0.99 + 5.0 * u(rng);
    const double beta = 1.01 + 5.0 * u(rng);
    const double need = threshold_exponent({p, q, alpha, beta, TheoremCase::T41_necessary}).exponent;
    const double suff = threshold_exponent({p, q, alpha, beta, TheoremCase::T41_sufficient}).exponent;
    CHECK(suff >= need - 1e-12);
    ++checked;
  }
  CHECK(checked == 2000);
}

TEST_CASE("threshold_exponent is deterministic") {
  const ThresholdQuery q{1.5, 3.0, 1.0, 3.5, TheoremCase::T43_necessary};
  CHECK(threshold_exponent(q).exponent == threshold_exponent(q).exponent);
  CHECK_THROWS_AS(threshold_exponent({1.5, 3.0, 0.4, 3.5, TheoremCase::T43_necessary}), InvalidCase);
}

TEST_CASE("case names round-trip") {
  for (auto c : {TheoremCase::T31_i, TheoremCase::T41_q1, TheoremCase::T403}) {
    CHECK(theorem_case_from_string(to_string(c)) == c);
  }
  CHECK_THROWS(theorem_case_from_string("T99"));
}
