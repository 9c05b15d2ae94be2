#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "genhilbert/errors.hpp"
#include "genhilbert/measure.hpp"
#include "genhilbert/quadrature.hpp"

using namespace genhilbert;

namespace {

// Midpoint Riemann sum on [lo, hi]; an oracle independent of the library rules.
template <class F>
double riemann(F f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += f(lo + (i + 0.5) * h);
  return sum * h;
}

std::vector<MeasureSpec> corpus() {
  return {MeasureSpec::lebesgue(),
          MeasureSpec::atom(0.5),
          MeasureSpec::power_family(0.5),
          MeasureSpec::power_family(2.0),
          MeasureSpec::power_family(3.0),
          MeasureSpec::log_carleson_family(2.0),
          MeasureSpec::log_power_family(1.5, 1.0),
          MeasureSpec({}, {DensityTerm{1.0, -0.9, 0.0, 0.0}}),
          MeasureSpec::atom(0.3, 2.0) + MeasureSpec::power_family(1.5).scaled(0.5)};
}

}  // namespace

TEST_CASE("gauss-jacobi rule integrates polynomials against the weight exactly") {
  const auto rule = quad::gauss_jacobi_unit(6, 1.5, 0.0);
  // Integral of x^k (1-x)^1.5 over [0,1] is B(k+1, 2.5).
  for (int k = 0; k <= 11; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], k);
    const double beta = std::exp(std::lgamma(k + 1.0) + std::lgamma(2.5) - std::lgamma(k + 3.5));
    CHECK(sum == doctest::Approx(beta).epsilon(1e-13));
  }
}

TEST_CASE("gauss-kronrod handles an endpoint singularity") {
  const auto est = quad::gauss_kronrod<double>([](double x) { return std::log(x); }, 0.0, 1.0);
  CHECK(est.value == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("moment examples") {
  CHECK(MeasureSpec::atom(0.5).moment(2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(MeasureSpec::lebesgue().moment(3) == doctest::Approx(0.25).epsilon(1e-15));
  const MeasureSpec two_one_minus_t({}, {DensityTerm{2.0, 1.0, 0.0, 0.0}});
  const double oracle = riemann([](double t) { return t * 2.0 * (1.0 - t); }, 0.0, 1.0, 1000000);
  CHECK(oracle == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(std::abs(two_one_minus_t.moment(1) - oracle) < 1e-10);
}

TEST_CASE("log-power moments agree with a Riemann sum in u = -log(1-t)") {
  const MeasureSpec mu = MeasureSpec::log_power_family(1.5, 1.0);
  // Density 1.5 (1-t)^0.5 L(t); with t = 1 - e^-u the measure is 1.5 e^{-1.5u}(log 2 + u) du.
  for (std::size_t n : {0, 1, 5, 40}) {
    auto integrand = [n](double u) {
      const double t = -std::expm1(-u);
      return std::pow(t, static_cast<double>(n)) * 1.5 * std::exp(-1.5 * u) * (std::numbers::ln2 + u);
    };
    const double oracle = riemann(integrand, 0.0, 40.0, 400000);
    CHECK(mu.moment(n) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("tail examples") {
  CHECK(MeasureSpec::lebesgue().tail(0.9) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(MeasureSpec::atom(0.5).tail(0.6) == 0.0);
  const MeasureSpec mu2 = MeasureSpec::power_family(2.0);
  for (double t : {0.0, 0.3, 0.9, 0.999}) {
    const double oracle = riemann([](double u) { return 2.0 * (1.0 - u); }, t, 1.0, 200000);
    CHECK(mu2.tail(t) == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(mu2.tail(t) == doctest::Approx((1.0 - t) * (1.0 - t)).epsilon(1e-14));
  }
}

TEST_CASE("log-Carleson family has tail (1-t)^s / log(2/(1-t))") {
  const MeasureSpec mu = MeasureSpec::log_carleson_family(2.0);
  for (double t : {0.0, 0.5, 0.9, 0.999, 1.0 - 1e-7}) {
    CHECK(mu.tail(t) == doctest::Approx((1.0 - t) * (1.0 - t) / log_weight(t)).epsilon(1e-9));
  }
}

TEST_CASE("integrate examples") {
  CHECK(MeasureSpec::lebesgue().integrate([](double) { return 1.0; }) == doctest::Approx(1.0));
  CHECK(MeasureSpec::atom(0.3, 2.0).integrate([](double t) { return t; }) == doctest::Approx(0.6));
  const double oracle = riemann([](double t) { return 1.0 / (1.0 - 0.5 * t); }, 0.0, 1.0, 1000000);
  const double value = MeasureSpec::lebesgue().integrate([](double t) { return 1.0 / (1.0 - 0.5 * t); });
  CHECK(std::abs(value - oracle) < 1e-11);
  CHECK(value == doctest::Approx(2.0 * std::numbers::ln2).epsilon(1e-13));
}

TEST_CASE("integrate reports a non-integrable integrand") {
  CHECK_THROWS_AS(MeasureSpec::lebesgue().integrate([](double t) { return 1.0 / (1.0 - t); }, 1e-10, 200),
                  NonConvergent);
}

TEST_CASE("truncate_tail examples") {
  const MeasureSpec leb = MeasureSpec::lebesgue().truncate_tail(0.5);
  CHECK(leb.total_mass() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(leb.tail(0.2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(leb.tail(0.7) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(MeasureSpec::atom(0.3).truncate_tail(0.5).is_zero());
  const MeasureSpec two({}, {DensityTerm{2.0, 1.0, 0.0, 0.0}});
  for (double r : {0.1, 0.5, 0.99}) {
    CHECK(two.truncate_tail(r).total_mass() == doctest::Approx((1.0 - r) * (1.0 - r)).epsilon(1e-13));
  }
}

TEST_CASE("moment invariants over the corpus") {
  for (const auto& mu : corpus()) {
    CHECK(mu.moment(0) == doctest::Approx(mu.total_mass()).epsilon(1e-12));
    CHECK(mu.tail(0.0) == doctest::Approx(mu.total_mass()).epsilon(1e-12));
    for (std::size_t n = 0; n < 60; ++n) {
      CHECK(mu.moment(n + 1) <= mu.moment(n) + 1e-15);
      CHECK(mu.moment(n + 1) >= 0.0);
    }
    double previous = mu.tail(0.0);
    for (int i = 1; i <= 40; ++i) {
      const double t = 1.0 - std::pow(10.0, -i / 5.0);
      const double tail = mu.tail(t);
      CHECK(tail <= previous + 1e-15);
      previous = tail;
    }
  }
}

TEST_CASE("integrate of t^n matches the moment for n <= 200") {
  for (const auto& mu : corpus()) {
    for (std::size_t n : {0, 1, 2, 7, 30, 100, 200}) {
      const double via_integrate = mu.integrate([n](double t) { return std::pow(t, static_cast<double>(n)); });
      CHECK(std::abs(via_integrate - mu.moment(n)) <= 1e-10);
    }
  }
}

TEST_CASE("truncate_tail mass equals the tail") {
  for (const auto& mu : corpus()) {
    for (double r : {0.0, 0.25, 0.6, 0.9, 0.999}) {
      CHECK(std::abs(mu.truncate_tail(r).total_mass() - mu.tail(r)) <= 1e-12);
    }
  }
}

TEST_CASE("an atom at the cut belongs to the tail but not to the restriction") {
  const MeasureSpec mu = MeasureSpec::atom(0.5, 2.0) + MeasureSpec::lebesgue();
  CHECK(mu.tail(0.5) == doctest::Approx(2.5));
  CHECK(mu.truncate_tail(0.5).total_mass() == doctest::Approx(0.5));
}

TEST_CASE("mixture moments are additive") {
  const auto c = corpus();
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const MeasureSpec sum = c[i] + c[i + 1];
    for (std::size_t n : {0, 3, 50}) CHECK(sum.moment(n) == doctest::Approx(c[i].moment(n) + c[i + 1].moment(n)).epsilon(1e-14));
  }
}

TEST_CASE("construction validates atoms and densities") {
  CHECK_THROWS(MeasureSpec::atom(1.0));
  CHECK_THROWS(MeasureSpec::atom(0.5, 0.0));
  CHECK_THROWS(MeasureSpec({}, {DensityTerm{1.0, -1.0, 0.0, 0.0}}));
}
