#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "genhilbert/carleson.hpp"
#include "genhilbert/probes.hpp"

using namespace genhilbert;

namespace {

std::vector<double> scan_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 12; ++i) g.push_back(1.0 - std::pow(10.0, -1.0 - i / 6.0));
  return g;
}

}  // namespace

TEST_CASE("bergman_pairing examples") {
  const TaylorPoly one = TaylorPoly::constant(1.0);
  const TaylorPoly z = TaylorPoly::monomial(1);
  CHECK(std::abs(bergman_pairing(one, one, 2.0, 0.0, 0.0) - 1.0) < 1e-12);
  CHECK(std::abs(bergman_pairing(z, one, 2.0, 0.0, 0.0)) < 1e-12);
  CHECK(std::abs(bergman_pairing(z, z, 2.0, 0.0, 0.0) - 0.5) < 1e-12);
  // Weight exponent alpha/p + gamma/p' = 1: integral of |z|^2 (1 - |z|^2) dA = 1/6.
  CHECK(std::abs(bergman_pairing(z, z, 2.0, 1.0, 1.0) - 1.0 / 6.0) < 1e-12);
}

TEST_CASE("bergman duality examples") {
  const TaylorPoly one = TaylorPoly::constant(1.0);
  const DualityResult leb = duality_identity_bergman(OperatorSpec(3.0, MeasureSpec::lebesgue(), 128), one, one);
  CHECK(std::abs(leb.rhs - 0.5) < 1e-12);
  CHECK(leb.residual <= 1e-6);
  CHECK(leb.rhs_kernel == leb.rhs);

  const DualityResult zero = duality_identity_bergman(OperatorSpec(2.0, MeasureSpec(), 64), one, one);
  CHECK(zero.lhs == cplx{});
  CHECK(zero.rhs == cplx{});

  const DualityResult atom =
      duality_identity_bergman(OperatorSpec(2.0, MeasureSpec::atom(0.5), 128), one, TaylorPoly::monomial(1));
  CHECK(std::abs(atom.rhs - 0.5) < 1e-14);
  CHECK(std::abs(atom.lhs - 0.5) <= 1e-6);
}

TEST_CASE("dirichlet duality examples") {
  const TaylorPoly one = TaylorPoly::constant(1.0);
  const TaylorPoly z = TaylorPoly::monomial(1);
  const DualityResult constant_g =
      duality_identity_dirichlet(OperatorSpec(2.0, MeasureSpec::lebesgue(), 64), z, one);
  CHECK(std::abs(constant_g.lhs) < 1e-14);
  CHECK(std::abs(constant_g.rhs) < 1e-14);
  const DualityResult zero = duality_identity_dirichlet(OperatorSpec(2.0, MeasureSpec(), 64), one, z);
  CHECK(zero.lhs == cplx{});
  CHECK(zero.rhs == cplx{});
}

TEST_CASE("dirichlet duality constant: beta over beta-1 against the kernel constant") {
  // mu = w delta_c, f = 1, g = z. H f(z) = w (1 - c z)^(-beta), so
  // (H f)'(z) = w beta c (1 - c z)^(-beta-1) = w beta c sum gamma_ratio(n, beta+1) c^n z^n.
  // Against (1 - |z|^2)^(beta-1) dA the constant monomial has mass 1/beta,
  // hence lhs = w beta c / beta = w c exactly, whatever beta is.
  for (double beta : {2.0, 3.0}) {
    const double c = 0.5, w = 1.0;
    const DualityResult d =
        duality_identity_dirichlet(OperatorSpec(beta, MeasureSpec::atom(c, w), 128), TaylorPoly::constant(1.0),
                                   TaylorPoly::monomial(1));
    CHECK(std::abs(d.lhs - w * c) <= 1e-6);
    CHECK(std::abs(d.rhs_kernel - w * c) <= 1e-14);
    CHECK(d.residual_kernel <= 1e-6);
    CHECK(std::abs(d.rhs - beta / (beta - 1.0) * w * c) <= 1e-14);
    // The factor beta/(beta-1) leaves a gap of w c / (beta - 1), scaled by 1 + |rhs|.
    const double gap = w * c / (beta - 1.0);
    CHECK(d.residual == doctest::Approx(gap / (1.0 + beta / (beta - 1.0) * w * c)).epsilon(1e-6));
  }
}

TEST_CASE("reproducing_check examples") {
  const std::vector<cplx> pts{{0.0, 0.0}, {0.3, 0.0}, {0.2, -0.5}, {-0.6, 0.1}};
  CHECK(reproducing_check(TaylorPoly::constant(1.0), 0.0, pts) <= 1e-8);
  CHECK(reproducing_check(TaylorPoly::monomial(1), 0.0, {cplx{0.3, 0.0}}) <= 1e-8);
  CHECK(reproducing_check(TaylorPoly::monomial(2), 1.5, pts) <= 1e-6);
}

TEST_CASE("embedding_ratio examples") {
  CHECK(embedding_ratio(MeasureSpec(), TaylorPoly::constant(1.0), 2.0, 2.0, 0.0) == 0.0);
  CHECK(embedding_ratio(MeasureSpec::lebesgue(), TaylorPoly::constant(1.0), 2.0, 2.0, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // Critical embedding exponent s = (2 + alpha) q / p.
  const double p = 2.0, q = 3.0, alpha = 0.5;
  const MeasureSpec mu = MeasureSpec::power_family((2.0 + alpha) * q / p);
  double lo = INFINITY, hi = 0.0;
  for (double a : {0.5, 0.9, 0.99, 0.999}) {
    const double r = embedding_ratio(mu, bergman_f(a, p, alpha), q, p, alpha);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi / lo <= 10.0);
}

TEST_CASE("lower_bound_scan slope recovery") {
  // Threshold at p = q = 2, alpha = 0, beta = 2 is 2.
  const auto grid = scan_grid();
  for (double s : {1.5, 2.5}) {
    const ProbeResult r = lower_bound_scan(OperatorSpec(2.0, MeasureSpec::power_family(s), 64), 2.0, 2.0, 0.0, grid);
    CHECK(std::abs(r.slope - (s - 2.0)) <= 0.1);
    if (s < 2.0) CHECK(r.verdict == ProbeVerdict::DivergenceDetected);
    if (s > 2.0) CHECK(r.verdict == ProbeVerdict::BoundedConsistent);
  }
  const ProbeResult zero = lower_bound_scan(OperatorSpec(2.0, MeasureSpec(), 64), 2.0, 2.0, 0.0, grid);
  for (const auto& row : zero.rows) CHECK(row.values.at(zero.primary) == 0.0);
}

TEST_CASE("lower_bound_scan sup is nonincreasing in s") {
  const auto grid = scan_grid();
  double previous = INFINITY;
  for (double s : {1.5, 2.0, 2.5}) {
    const ProbeResult r = lower_bound_scan(OperatorSpec(2.0, MeasureSpec::power_family(s), 64), 2.0, 2.0, 0.0, grid);
    CHECK(r.sup <= previous);
    previous = r.sup;
  }
}

TEST_CASE("ratio_sup with a point mass at the origin") {
  // H f = a_0 for mu = delta_0, so the ratio is |f(0)| / ||f||_source.
  const OperatorSpec op(2.0, MeasureSpec::atom(0.0), 64);
  const SpaceParams a2{SpaceKind::Bergman, 2.0, 0.0};
  const ProbeResult r = ratio_sup(op, a2, a2, Family::BergmanF, {0.5, 0.9, 0.99});
  for (const auto& row : r.rows) {
    const double a = row.param;
    // f_a(0) = 1 - a^2 and ||f_a|| = 1 at p = 2, alpha = 0.
    CHECK(row.values.at(r.primary) == doctest::Approx(1.0 - a * a).epsilon(1e-4));
  }
  CHECK(r.sup <= 1.0);
  const ProbeResult zero = ratio_sup(OperatorSpec(2.0, MeasureSpec(), 64), a2, a2, Family::BergmanF, {0.5, 0.9});
  CHECK(zero.sup == 0.0);
}

TEST_CASE("ratio_sup stays bounded above the threshold") {
  const OperatorSpec op(2.0, MeasureSpec::power_family(2.5), 64);
  const SpaceParams a2{SpaceKind::Bergman, 2.0, 0.0};
  const ProbeResult r = ratio_sup(op, a2, a2, Family::BergmanF, {0.9, 0.99, 0.999});
  const double at_09 = r.rows.front().values.at(r.primary);
  CHECK(r.sup <= 3.0 * at_09);
}

TEST_CASE("compactness_probe verdicts") {
  std::vector<double> r_grid{0.0};
  for (int i = 1; i <= 12; ++i) r_grid.push_back(1.0 - std::pow(10.0, -i / 3.0));
  const SpaceParams a2{SpaceKind::Bergman, 2.0, 0.0};

  const ProbeResult fast = compactness_probe(OperatorSpec(2.0, MeasureSpec::power_family(2.5), 64), 2.0, r_grid, a2,
                                             {0.5, 0.9});
  REQUIRE(fast.decay.has_value());
  CHECK(*fast.decay == Verdict::Vanishing);
  // Carleson column is (1 - r)^0.5 exactly.
  for (const auto& row : fast.rows) {
    CHECK(row.values.at(0) == doctest::Approx(std::sqrt(1.0 - row.param)).epsilon(1e-9));
  }

  const ProbeResult critical =
      compactness_probe(OperatorSpec(2.0, MeasureSpec::power_family(2.0), 64), 2.0, r_grid, a2, {0.5, 0.9});
  REQUIRE(critical.decay.has_value());
  CHECK(*critical.decay == Verdict::NonVanishing);
  const double first = critical.rows.front().values.at(0);
  for (const auto& row : critical.rows) {
    CHECK(row.values.at(0) >= 0.9 * first);
    CHECK(row.values.at(0) <= 1.1 * first);
  }

  const ProbeResult atom =
      compactness_probe(OperatorSpec(2.0, MeasureSpec::atom(0.99), 64), 2.0, {0.5, 0.995, 0.999}, a2, {0.5, 0.9});
  CHECK(atom.rows.at(0).values.at(0) > 0.0);
  for (std::size_t i = 1; i < atom.rows.size(); ++i) {
    CHECK(atom.rows[i].values.at(0) == 0.0);
    CHECK(atom.rows[i].values.at(1) == 0.0);
  }
}

TEST_CASE("random_poly is reproducible per index") {
  const TaylorPoly a = random_poly(42, 3, 2.0, 0.0);
  const TaylorPoly b = random_poly(42, 3, 2.0, 0.0);
  const TaylorPoly c = random_poly(42, 4, 2.0, 0.0);
  CHECK(a.size() == 65);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k] == b[k]);
    CHECK(std::abs(a[k]) <= std::pow(k + 1.0, -1.0) + 1e-15);
  }
  CHECK(a[0] != c[0]);
}

TEST_CASE("last_decade_slope fits a power law") {
  std::vector<double> params, values;
  for (int i = 0; i <= 12; ++i) {
    const double a = 1.0 - std::pow(10.0, -1.0 - i / 6.0);
    params.push_back(a);
    values.push_back(3.0 * std::pow(1.0 - a, -0.7));
  }
  CHECK(last_decade_slope(params, values) == doctest::Approx(-0.7).epsilon(1e-10));
  CHECK_THROWS(last_decade_slope({0.5}, {1.0}));
}

TEST_CASE("verdict and family names") {
  CHECK(family_from_string(to_string(Family::LogG)) == Family::LogG);
  CHECK_THROWS(family_from_string("nope"));
  CHECK(to_string(ProbeVerdict::Inconclusive) != to_string(ProbeVerdict::BoundedConsistent));
}
