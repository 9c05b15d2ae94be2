#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "genhilbert/errors.hpp"
#include "genhilbert/gamma_ratio.hpp"
#include "genhilbert/operator.hpp"
#include "genhilbert/probes.hpp"
#include "genhilbert/spaces.hpp"
#include "genhilbert/test_functions.hpp"

using namespace genhilbert;

namespace {

const cplx I{0.0, 1.0};

TaylorPoly random_poly_gauss(std::mt19937_64& rng, std::size_t degree) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cplx> c(degree + 1);
  for (auto& x : c) x = {n(rng), n(rng)};
  return TaylorPoly(c);
}

}  // namespace

TEST_CASE("evaluate examples") {
  CHECK(TaylorPoly::constant(1.0)(cplx{0.3, 0.4}) == cplx{1.0, 0.0});
  std::vector<double> geo(201);
  for (std::size_t k = 0; k < geo.size(); ++k) geo[k] = std::pow(0.5, static_cast<double>(k));
  CHECK(std::abs(TaylorPoly::from_real(geo)(0.5) - 4.0 / 3.0) < 1e-12);
  CHECK(TaylorPoly::from_real({0.0, 1.0})(0.5 * I) == 0.5 * I);
}

TEST_CASE("derivative examples") {
  CHECK(TaylorPoly::constant(3.0).derivative().empty());
  const TaylorPoly d = TaylorPoly::from_real({0.0, 1.0, 1.0}).derivative();
  CHECK(d.size() == 2);
  CHECK(d[0] == cplx{1.0});
  CHECK(d[1] == cplx{2.0});
  const double a = 0.7;
  const TaylorPoly g = test_g_log(a).derivative();
  for (std::size_t n = 0; n + 1 < g.size(); ++n) {
    CHECK(std::abs(g[n] - std::pow(a, n + 1.0)) <= 1e-14);
  }
}

TEST_CASE("bergman_norm examples") {
  for (double p : {0.5, 1.0, 2.0, 3.5}) {
    for (double alpha : {-0.5, 0.0, 2.0}) CHECK(bergman_norm(TaylorPoly::constant(1.0), p, alpha) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(bergman_norm(TaylorPoly::monomial(1), 2.0, 0.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
  CHECK(bergman_norm(TaylorPoly::monomial(1), 2.0, 1.0) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-10));
}

TEST_CASE("monomial norms") {
  for (std::size_t k = 0; k <= 64; ++k) {
    CHECK(std::abs(bergman_norm(TaylorPoly::monomial(k), 2.0, 0.0) - 1.0 / std::sqrt(k + 1.0)) <= 1e-8);
  }
  // |z^k|^p is radial, so the weighted integral is (alpha+1) B(kp/2 + 1, alpha + 1).
  // Odd powers of r are not polynomial in r^2, so this holds to the grid's 1e-6.
  for (double p : {1.0, 1.5, 3.0}) {
    for (double alpha : {0.0, 0.7}) {
      for (std::size_t k : {1, 5, 30}) {
        const double x = k * p / 2.0 + 1.0;
        const double integral = (alpha + 1.0) * std::exp(std::lgamma(x) + std::lgamma(alpha + 1.0) - std::lgamma(x + alpha + 1.0));
        CHECK(bergman_norm(TaylorPoly::monomial(k), p, alpha) == doctest::Approx(std::pow(integral, 1.0 / p)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("dirichlet_norm examples") {
  CHECK(dirichlet_norm(TaylorPoly::constant(cplx{3.0, -4.0}), 2.0, 0.0) == doctest::Approx(5.0));
  CHECK(dirichlet_norm(TaylorPoly::monomial(1), 2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dirichlet_norm(TaylorPoly::monomial(2), 2.0, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("bloch_norm examples") {
  CHECK(bloch_norm(TaylorPoly::monomial(1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bloch_norm(TaylorPoly::constant(2.0)) == doctest::Approx(2.0));
}

TEST_CASE("bloch norm of the log family against a dense real-axis scan") {
  // (1 - |z|^2) |g'(z)| = a (1 - |z|^2) / |1 - a z| peaks on the positive real axis.
  for (double a : {0.5, 0.9, 0.99}) {
    double best = 0.0;
    for (int i = 0; i <= 2000000; ++i) {
      const double x = i / 2000000.0;
      best = std::max(best, a * (1.0 - x * x) / (1.0 - a * x));
    }
    const double oracle = std::numbers::ln2 + best;
    const double value = bloch_norm(log_g(a));
    CHECK(value <= oracle + 1e-9);
    CHECK(value >= oracle - 1e-3);
    CHECK(value <= std::numbers::ln2 + 2.0);
  }
}

TEST_CASE("test family coefficients") {
  const double a = 0.6;
  const TaylorPoly f = test_f_bergman(a, 2.0, 0.0, 64);
  for (std::size_t n = 0; n <= 64; ++n) {
    CHECK(f[n].real() == doctest::Approx((1.0 - a * a) * (n + 1.0) * std::pow(a, static_cast<double>(n))).epsilon(1e-13));
  }
  const TaylorPoly d = test_f_dirichlet(a, 2.0, 0.0, 64);
  for (std::size_t n = 0; n <= 64; ++n) {
    CHECK(d[n].real() == doctest::Approx((1.0 - a * a) * std::pow(a, static_cast<double>(n)) / a).epsilon(1e-13));
  }
  CHECK(d(0.0).real() == doctest::Approx((1.0 - a * a) / a));
  CHECK(test_f_dirichlet(0.5, 3.0, 1.0)(0.0).real() == doctest::Approx(2.0 * std::pow(0.75, 1.0)).epsilon(1e-14));
  const TaylorPoly g = test_g_bergman(a, 2.0, 2.0, 64);
  for (std::size_t n = 0; n <= 64; ++n) CHECK(g[n] == f[n]);
  const TaylorPoly small = test_f_bergman(1e-9, 1.5, 0.5);
  CHECK(std::abs(small(cplx{0.5, 0.5}) - 1.0) < 1e-8);
  CHECK(std::abs(test_g_log(1e-9)(0.9) - std::numbers::ln2) < 1e-8);
}

TEST_CASE("truncated families agree with the closed form") {
  for (double a : {0.3, 0.8, 0.95}) {
    for (auto [p, alpha] : {std::pair{2.0, 0.0}, std::pair{1.5, 0.5}, std::pair{3.0, 2.0}}) {
      const TaylorPoly f = test_f_bergman(a, p, alpha);
      const TestFunction exact = bergman_f(a, p, alpha);
      for (int i = 0; i <= 20; ++i) {
        const double t = a * i / 20.0;
        const double direct = std::pow((1.0 - a * a) / ((1.0 - a * t) * (1.0 - a * t)), (alpha + 2.0) / p);
        CHECK(std::abs(f(t) - direct) <= 1e-8 * std::max(1.0, direct));
        CHECK(std::abs(exact(t) - direct) <= 1e-12 * std::max(1.0, direct));
      }
    }
  }
  CHECK(std::abs(test_g_log(0.9, 400)(0.5) - std::log(2.0 / (1.0 - 0.45))) < 1e-10);
}

TEST_CASE("truncation below the default order is refused") {
  CHECK_THROWS_AS(test_f_bergman(0.99, 2.0, 0.0, 16), TruncationInsufficient);
  CHECK_THROWS_AS(test_g_log(0.9, 8), TruncationInsufficient);
  CHECK_NOTHROW(test_g_log(0.9));
}

TEST_CASE("family norms stay bounded in a") {
  for (auto [p, alpha] : {std::pair{2.0, 0.0}, std::pair{1.0, 0.0}, std::pair{3.0, 1.0}}) {
    double lo = INFINITY, hi = 0.0;
    for (double a : {0.5, 0.9, 0.99}) {
      const double norm = bergman_norm(bergman_f(a, p, alpha), p, alpha, probe_grid(), a);
      lo = std::min(lo, norm);
      hi = std::max(hi, norm);
    }
    CHECK(hi / lo <= 4.0);
  }
  double lo = INFINITY, hi = 0.0;
  for (double a : {0.5, 0.9, 0.99}) {
    const double norm = dirichlet_norm(dirichlet_f(a, 2.0, 0.0), 2.0, 0.0, probe_grid(), a);
    lo = std::min(lo, norm);
    hi = std::max(hi, norm);
  }
  CHECK(hi / lo <= 4.0);
}

TEST_CASE("bergman family norm at p = 2, alpha = 0 is one") {
  // |f_a|^2 is the Jacobian of a disk automorphism, so the A^2_0 norm is exactly 1.
  for (double a : {0.5, 0.9, 0.99}) {
    CHECK(bergman_norm(bergman_f(a, 2.0, 0.0), 2.0, 0.0, probe_grid(), a) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("coeff_decay_report examples") {
  std::vector<double> geo(200);
  for (std::size_t k = 0; k < geo.size(); ++k) geo[k] = std::pow(0.8, static_cast<double>(k));
  const CoeffDecayReport g = coeff_decay_report(TaylorPoly::from_real(geo), 2.0, 0.0);
  CHECK(g.enough_terms);
  CHECK(g.ratios_decreasing);
  CHECK(g.partial_sums_settle);
  CHECK_FALSE(g.non_decay_flag);
  CHECK(g.ratio_exponent == doctest::Approx(0.5));

  const CoeffDecayReport f = coeff_decay_report(test_f_bergman(0.9, 2.0, 0.0, 1024), 2.0, 0.0);
  CHECK(f.partial_sums_settle);
  CHECK_FALSE(f.non_decay_flag);

  std::vector<double> lin(200);
  for (std::size_t k = 0; k < lin.size(); ++k) lin[k] = static_cast<double>(k);
  const CoeffDecayReport n = coeff_decay_report(TaylorPoly::from_real(lin), 2.0, 0.0);
  CHECK(n.non_decay_flag);
  CHECK_FALSE(n.ratios_decreasing);

  CHECK(coeff_decay_report(TaylorPoly::from_real(geo), 0.5, 0.0).ratio_exponent == doctest::Approx(3.0));
}

TEST_CASE("norm homogeneity") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const TaylorPoly f = random_poly_gauss(rng, 12);
    const cplx lambda{n(rng), n(rng)};
    for (double p : {1.0, 2.0, 3.0}) {
      const double base = bergman_norm(f, p, 0.5);
      CHECK(std::abs(bergman_norm(f * lambda, p, 0.5) - std::abs(lambda) * base) <= 1e-10 * std::abs(lambda) * base);
    }
  }
}

TEST_CASE("antiderivative construction matches the Dirichlet norm") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 4; ++trial) {
    const TaylorPoly f = random_poly_gauss(rng, 10);
    const cplx c0{0.3, -0.1};
    const TaylorPoly F = f.antiderivative(c0);
    for (double p : {1.5, 2.0, 3.0}) {
      const double alpha = 0.5;
      CHECK(std::abs(dirichlet_norm(F, p, alpha + p) - (std::abs(c0) + bergman_norm(f, p, alpha + p))) <= 1e-12);
      const double ratio = dirichlet_norm(F, p, alpha + p) / bergman_norm(F, p, alpha);
      CHECK(ratio > 0.05);
      CHECK(ratio < 20.0);
    }
  }
}

TEST_CASE("image norm in A^2_{beta-2} equals a double integral over the measure") {
  // Monomials have A^2_{beta-2} norm^2 equal to 1 / gamma_ratio(n, beta), so
  // ||H f||^2 = sum over n of gamma_ratio(n, beta) (integral of t^n f dmu)^2
  //          = double integral of f(t) f(s) (1 - t s)^(-beta) dmu(t) dmu(s).
  const double beta = 2.5;
  const MeasureSpec mu({}, {DensityTerm{4.0, 3.0, 0.0, 0.0}});
  const TaylorPoly f = TaylorPoly::from_real({1.0, -0.5, 0.25});
  const OperatorSpec op(beta, mu, 256);
  const TaylorPoly hf = apply_matrix(op, f);
  const double quad = bergman_norm(hf, 2.0, beta - 2.0);
  const auto fr = [&](double t) { return f(t).real(); };
  const double dbl = mu.integrate([&](double t) {
    return fr(t) * mu.integrate([&](double s) { return fr(s) * std::pow(1.0 - t * s, -beta); }, 1e-13);
  }, 1e-12);
  CHECK(quad * quad == doctest::Approx(dbl).epsilon(1e-7));
}

TEST_CASE("space validation") {
  CHECK_THROWS(bergman_norm(TaylorPoly::constant(1.0), 2.0, -1.0));
  CHECK_THROWS(bergman_norm(TaylorPoly::constant(1.0), 0.0, 0.0));
  CHECK(space_kind_from_string(to_string(SpaceKind::Dirichlet)) == SpaceKind::Dirichlet);
}
