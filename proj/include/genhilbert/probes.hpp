#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genhilbert/carleson.hpp"
#include "genhilbert/operator.hpp"
#include "genhilbert/spaces.hpp"

namespace genhilbert {

enum class ProbeVerdict { BoundedConsistent, DivergenceDetected, Inconclusive };
enum class Family { BergmanF, DirichletF, LogG, RandomPoly };

std::string to_string(ProbeVerdict v);
std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// Fitted log-log slope at or below this value counts as divergence.
inline constexpr double kDivergenceSlope = -0.2;

struct ProbeRow {
  double param = 0.0;
  std::vector<double> values;
};

struct ProbeResult {
  std::string probe;
  std::string param_name = "a";
  std::vector<std::string> columns;
  std::vector<ProbeRow> rows;
  /// Column whose maximum is reported as `sup` and whose trend is fitted.
  std::size_t primary = 0;
  double sup = 0.0;
  /// Least-squares slope of log(value) against log(1 - param) over the last
  /// decade of the grid; 0 when the column vanishes identically.
  double slope = 0.0;
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
  /// Decay classification, set by probes that track a limit r -> 1.
  std::optional<Verdict> decay;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<std::string> notes;
};

/// Slope of log(values) against log(1 - params) over the points with
/// 1 - param within one decade of the last. Requires positive values.
double last_decade_slope(const std::vector<double>& params, const std::vector<double>& values);

/// Grid used by the pairing identities: radially exact for the polynomial
/// degrees involved, with angular aliasing suppressed by |z|^angular.
QuadratureGrid duality_grid();
QuadratureGrid reproducing_grid();
/// Recentred grid used for norms of test functions and operator images.
QuadratureGrid probe_grid();
/// Starting grid for norms in ratio_sup. Operator images are only
/// Hoelder-continuous at z = 1, so the self-check works at probe grade (5%),
/// the grid is doubled up to twice on failure, and each row reports the
/// observed check difference.
QuadratureGrid operator_image_grid();

/// Integral of h conj(g) (1 - |z|^2)^(alpha/p + gamma/p') dA.
cplx bergman_pairing(const TaylorPoly& h, const TaylorPoly& g, double p, double alpha, double gamma,
                     const QuadratureGrid& grid = duality_grid());

struct DualityResult {
  cplx lhs;
  /// Right side with the constant factor of the identity under test.
  cplx rhs;
  double residual = 0.0;
  /// Right side with the constant given by the reproducing kernel of the
  /// weight actually used on the left; equal to rhs for the Bergman form.
  cplx rhs_kernel;
  double residual_kernel = 0.0;
};

/// lhs = integral of conj(H f) g (1 - |z|^2)^(beta - 2) dA, with H f taken in
/// integral form; rhs = (1/(beta - 1)) integral of conj(f) g dmu.
DualityResult duality_identity_bergman(const OperatorSpec& op, const TaylorPoly& f, const TaylorPoly& g,
                                       const QuadratureGrid& grid = duality_grid());

/// lhs = integral of conj((H f)') g' (1 - |z|^2)^(beta - 1) dA;
/// rhs = (beta/(beta - 1)) integral of t conj(f(t)) g'(t) dmu(t).
/// The weight (1 - |z|^2)^(beta - 1) reproduces with constant beta, which
/// gives rhs_kernel = integral of t conj(f(t)) g'(t) dmu(t).
DualityResult duality_identity_dirichlet(const OperatorSpec& op, const TaylorPoly& f, const TaylorPoly& g,
                                         const QuadratureGrid& grid = duality_grid());

/// Max over z of |f(z) - (alpha+1) integral of f(w)(1-|w|^2)^alpha (1 - z conj(w))^(-2-alpha) dA(w)|.
double reproducing_check(const TaylorPoly& f, double alpha, const std::vector<cplx>& z_grid,
                         const QuadratureGrid& grid = reproducing_grid());

/// (integral of |f|^q dmu)^(1/q) / ||f||_{A^p_alpha}.
double embedding_ratio(const MeasureSpec& mu, const TaylorPoly& f, double q, double p, double alpha,
                       const QuadratureGrid& grid = {});
/// Closed-form variant; the norm quadrature is recentred at a.
double embedding_ratio(const MeasureSpec& mu, const TestFunction& f, double q, double p, double alpha,
                       const QuadratureGrid& grid = probe_grid());

/// Rows (a, pairing value, tail-side lower bound, value / bound). For q > 1
/// the pairing is the integral of f_a g_a dmu with the exponent
/// (alpha+2)/p + beta/q'; for q = 1 it uses g = log(2/(1 - a z)).
ProbeResult lower_bound_scan(const OperatorSpec& op, double p, double q, double alpha,
                             const std::vector<double>& a_grid);

/// Coefficients sigma_k u_k, k <= degree, with u_k uniform on the unit disk
/// and sigma_k = (k+1)^(-(alpha+2)/p). Each index draws from its own stream.
TaylorPoly random_poly(std::uint64_t seed, std::size_t index, double p, double alpha, std::size_t degree = 64);

/// Rows (param, ||f||_source, ||H f||_target, ratio, grid check) over the
/// family; for RandomPoly the params are function indices 0..count-1.
/// Norms are recentred at a.
ProbeResult ratio_sup(const OperatorSpec& op, const SpaceParams& source, const SpaceParams& target,
                      Family family, const std::vector<double>& a_grid,
                      const QuadratureGrid& grid = operator_image_grid(),
                      std::uint64_t seed = 0, std::size_t random_count = 8);

/// Rows (r, Carleson constant of mu_r at s, sup over f_a of the embedding
/// ratio against mu_r). The family includes a = 1 - kappa (1 - r) for a few
/// kappa <= 1 on top of `a_grid`, so it keeps reaching past r.
ProbeResult compactness_probe(const OperatorSpec& op, double s, const std::vector<double>& r_grid,
                              const SpaceParams& source, const std::vector<double>& a_grid,
                              const QuadratureGrid& grid = probe_grid());

}  // namespace genhilbert
