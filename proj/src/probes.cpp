#include "genhilbert/probes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "genhilbert/parallel.hpp"

namespace genhilbert {

namespace {

constexpr double kKernelTol = 1e-12;
constexpr double kScanTol = 1e-10;

void check_parameter_grid(const std::vector<double>& grid, const char* what, bool allow_zero) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool in_range = (allow_zero ? grid[i] >= 0.0 : grid[i] > 0.0) && grid[i] < 1.0;
    if (!in_range) throw std::invalid_argument(std::string(what) + ": grid values must lie in (0, 1)");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
    }
  }
}

void finish(ProbeResult& result) {
  std::vector<double> params;
  std::vector<double> values;
  result.sup = 0.0;
  bool all_positive = !result.rows.empty();
  for (const auto& row : result.rows) {
    const double v = row.values.at(result.primary);
    result.sup = std::max(result.sup, v);
    params.push_back(row.param);
    values.push_back(v);
    if (!(v > 0.0)) all_positive = false;
  }
  if (all_positive && result.param_name != "index") {
    result.slope = last_decade_slope(params, values);
    result.verdict = result.slope <= kDivergenceSlope ? ProbeVerdict::DivergenceDetected
                                                      : ProbeVerdict::BoundedConsistent;
  } else if (result.sup == 0.0) {
    result.slope = 0.0;
    result.verdict = ProbeVerdict::BoundedConsistent;
    result.notes.push_back("primary column vanishes identically");
  } else {
    result.slope = 0.0;
    result.verdict = ProbeVerdict::Inconclusive;
  }
}

}  // namespace

std::string to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::BoundedConsistent: return "BoundedConsistent";
    case ProbeVerdict::DivergenceDetected: return "DivergenceDetected";
    case ProbeVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string to_string(Family f) {
  switch (f) {
    case Family::BergmanF: return "BergmanF";
    case Family::DirichletF: return "DirichletF";
    case Family::LogG: return "LogG";
    case Family::RandomPoly: return "RandomPoly";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  for (auto f : {Family::BergmanF, Family::DirichletF, Family::LogG, Family::RandomPoly}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

double last_decade_slope(const std::vector<double>& params, const std::vector<double>& values) {
  if (params.size() != values.size() || params.size() < 2) {
    throw std::invalid_argument("last_decade_slope: need at least two matching points");
  }
  const double last_gap = 1.0 - params.back();
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double gap = 1.0 - params[i];
    if (gap <= 10.0 * last_gap * (1.0 + 1e-12)) {
      xs.push_back(std::log(gap));
      ys.push_back(std::log(values[i]));
    }
  }
  if (xs.size() < 2) throw std::invalid_argument("last_decade_slope: fewer than two points in the last decade");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

QuadratureGrid duality_grid() {
  // Six Gauss-Jacobi nodes integrate the radial polynomials of degree <= 11
  // exactly; the largest node is about 0.966, so modes aliased by 2048 angles
  // carry a factor below 1e-15.
  QuadratureGrid grid;
  grid.radial = 6;
  grid.angular = 2048;
  grid.self_check = false;
  return grid;
}

QuadratureGrid reproducing_grid() {
  QuadratureGrid grid;
  grid.radial = 8;
  grid.angular = 64;
  grid.self_check = false;
  return grid;
}

QuadratureGrid operator_image_grid() {
  QuadratureGrid grid;
  grid.radial = 32;
  grid.angular = 256;
  grid.richardson_tol = 0.05;
  return grid;
}

QuadratureGrid probe_grid() {
  QuadratureGrid grid;
  grid.radial = 24;
  grid.angular = 128;
  grid.richardson_tol = 1e-4;
  return grid;
}

cplx bergman_pairing(const TaylorPoly& h, const TaylorPoly& g, double p, double alpha, double gamma,
                     const QuadratureGrid& grid) {
  if (!(p > 1.0)) throw std::invalid_argument("bergman_pairing: need p > 1");
  if (!(alpha > -1.0) || !(gamma > -1.0)) throw std::invalid_argument("bergman_pairing: need alpha, gamma > -1");
  const double w = alpha / p + gamma / conjugate_index(p);
  auto integrand = [&](cplx z) { return h.evaluate(z) * std::conj(g.evaluate(z)); };
  return disk_integral<cplx>(integrand, w, grid).value;
}

DualityResult duality_identity_bergman(const OperatorSpec& op, const TaylorPoly& f, const TaylorPoly& g,
                                       const QuadratureGrid& grid) {
  const double beta = op.beta();
  if (!(beta > 1.0)) throw std::invalid_argument("duality identity needs beta > 1");
  auto fe = [&](double t) { return f.evaluate(t); };
  auto integrand = [&](cplx z) { return std::conj(apply_integral_fn(op, fe, z, kKernelTol)) * g.evaluate(z); };
  DualityResult out;
  out.lhs = disk_integral<cplx>(integrand, beta - 2.0, grid).value;
  const cplx pairing =
      op.measure().integrate([&](double t) { return std::conj(f.evaluate(t)) * g.evaluate(t); }, kKernelTol);
  out.rhs = pairing / (beta - 1.0);
  out.residual = std::abs(out.lhs - out.rhs) / (1.0 + std::abs(out.rhs));
  out.rhs_kernel = out.rhs;
  out.residual_kernel = out.residual;
  return out;
}

DualityResult duality_identity_dirichlet(const OperatorSpec& op, const TaylorPoly& f, const TaylorPoly& g,
                                         const QuadratureGrid& grid) {
  const double beta = op.beta();
  if (!(beta > 1.0)) throw std::invalid_argument("duality identity needs beta > 1");
  const TaylorPoly dg = g.derivative();
  auto fe = [&](double t) { return f.evaluate(t); };
  auto integrand = [&](cplx z) {
    return std::conj(apply_integral_derivative_fn(op, fe, z, kKernelTol)) * dg.evaluate(z);
  };
  DualityResult out;
  out.lhs = disk_integral<cplx>(integrand, beta - 1.0, grid).value;
  out.rhs_kernel = op.measure().integrate(
      [&](double t) { return t * std::conj(f.evaluate(t)) * dg.evaluate(t); }, kKernelTol);
  out.residual_kernel = std::abs(out.lhs - out.rhs_kernel) / (1.0 + std::abs(out.rhs_kernel));
  out.rhs = beta / (beta - 1.0) * out.rhs_kernel;
  out.residual = std::abs(out.lhs - out.rhs) / (1.0 + std::abs(out.rhs));
  return out;
}

double reproducing_check(const TaylorPoly& f, double alpha, const std::vector<cplx>& z_grid,
                         const QuadratureGrid& grid) {
  if (!(alpha > -1.0)) throw std::invalid_argument("reproducing_check: need alpha > -1");
  double worst = 0.0;
  for (const cplx& z : z_grid) {
    if (!(std::abs(z) < 1.0)) throw std::invalid_argument("reproducing_check: points must lie in the disk");
    auto integrand = [&](cplx w) {
      return f.evaluate(w) * std::exp(-(2.0 + alpha) * std::log(1.0 - z * std::conj(w)));
    };
    const cplx reproduced = (alpha + 1.0) * disk_integral<cplx>(integrand, alpha, grid).value;
    worst = std::max(worst, std::abs(f.evaluate(z) - reproduced));
  }
  return worst;
}

double embedding_ratio(const MeasureSpec& mu, const TaylorPoly& f, double q, double p, double alpha,
                       const QuadratureGrid& grid) {
  if (!(p > 0.0 && q >= p)) throw std::invalid_argument("embedding_ratio: need 0 < p <= q");
  if (mu.is_zero()) return 0.0;
  const double norm = bergman_norm(f, p, alpha, grid);
  if (!(norm > 0.0)) throw std::invalid_argument("embedding_ratio: f must be nonzero");
  const double lq = mu.integrate([&](double t) { return std::pow(std::abs(f.evaluate(t)), q); }, kScanTol);
  return std::pow(lq, 1.0 / q) / norm;
}

double embedding_ratio(const MeasureSpec& mu, const TestFunction& f, double q, double p, double alpha,
                       const QuadratureGrid& grid) {
  if (!(p > 0.0 && q >= p)) throw std::invalid_argument("embedding_ratio: need 0 < p <= q");
  if (mu.is_zero()) return 0.0;
  const double norm = bergman_norm(f, p, alpha, grid, f.a());
  const double lq = mu.integrate([&](double t) { return std::pow(std::abs(f.value(t)), q); }, kScanTol);
  return std::pow(lq, 1.0 / q) / norm;
}

ProbeResult lower_bound_scan(const OperatorSpec& op, double p, double q, double alpha,
                             const std::vector<double>& a_grid) {
  check_parameter_grid(a_grid, "lower_bound_scan", false);
  if (!(p > 0.0) || !(alpha > -1.0) || !(q >= 1.0)) {
    throw std::invalid_argument("lower_bound_scan: need p > 0, alpha > -1, q >= 1");
  }
  const double beta = op.beta();
  const bool log_case = q == 1.0;
  const double c = (alpha + 2.0) / p;
  const double tau = log_case ? c : c + beta / conjugate_index(q);
  const MeasureSpec& mu = op.measure();

  ProbeResult result;
  result.probe = log_case ? "lower_bound_scan_log" : "lower_bound_scan";
  result.columns = {"value", "tail_bound", "ratio"};
  result.parameters = {{"p", p}, {"q", q}, {"alpha", alpha}, {"beta", beta}, {"threshold", tau}};
  result.rows = parallel_map<ProbeRow>(a_grid.size(), [&](std::size_t i) {
    const double a = a_grid[i];
    const TestFunction f = bergman_f(a, p, alpha);
    const double one_minus_a2 = -std::expm1(2.0 * std::log(a));
    double value = 0.0;
    double bound = 0.0;
    if (log_case) {
      const TestFunction g = log_g(a);
      value = mu.integrate([&](double t) { return f.value(t).real() * g.value(t).real(); }, kScanTol);
      bound = mu.tail(a) * (std::numbers::ln2 - std::log(one_minus_a2)) / std::pow(one_minus_a2, c);
    } else {
      const TestFunction g = bergman_g(a, beta, conjugate_index(q));
      value = mu.integrate([&](double t) { return f.value(t).real() * g.value(t).real(); }, kScanTol);
      bound = mu.tail(a) / std::pow(one_minus_a2, tau);
    }
    const double ratio = bound > 0.0 ? value / bound : 0.0;
    return ProbeRow{a, {value, bound, ratio}};
  });
  finish(result);
  return result;
}

TaylorPoly random_poly(std::uint64_t seed, std::size_t index, double p, double alpha, std::size_t degree) {
  if (!(p > 0.0) || !(alpha > -1.0)) throw std::invalid_argument("random_poly: need p > 0, alpha > -1");
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<cplx> coeffs(degree + 1);
  const double decay = (alpha + 2.0) / p;
  for (std::size_t k = 0; k <= degree; ++k) {
    cplx u;
    do {
      u = {unit(rng), unit(rng)};
    } while (std::norm(u) >= 1.0);
    coeffs[k] = std::pow(static_cast<double>(k + 1), -decay) * u;
  }
  return TaylorPoly(std::move(coeffs));
}

namespace {

struct NormEstimate {
  double norm = 0.0;
  double check = 0.0;
};

// Doubles both node counts up to twice when the self-check fails.
template <class F>
NormEstimate lp_norm_checked(F&& f, double p, double alpha, const QuadratureGrid& grid, cplx center) {
  auto integrand = [&](cplx z) { return std::pow(std::abs(f(z)), p); };
  QuadratureGrid g = grid;
  for (int attempt = 0;; ++attempt) {
    try {
      const auto est = disk_integral<double>(integrand, alpha, g, center);
      return {std::pow((alpha + 1.0) * est.value, 1.0 / p), est.check_difference};
    } catch (const GridTooCoarse&) {
      if (attempt == 2) throw;
      g.radial *= 2;
      g.angular *= 2;
    }
  }
}

template <class F>
NormEstimate target_norm(const OperatorSpec& op, F&& f, const SpaceParams& target, const QuadratureGrid& grid,
                         cplx center) {
  auto hf = [&](cplx z) { return apply_integral_fn(op, f, z, kScanTol); };
  if (target.kind == SpaceKind::Bergman) return lp_norm_checked(hf, target.p, target.alpha, grid, center);
  auto dhf = [&](cplx z) { return apply_integral_derivative_fn(op, f, z, kScanTol); };
  NormEstimate est = lp_norm_checked(dhf, target.p, target.alpha, grid, center);
  est.norm += std::abs(hf(0.0));
  return est;
}

template <class F>
NormEstimate source_norm(const SpaceParams& source, F&& value, const QuadratureGrid& grid, cplx center,
                         const std::function<double()>& bloch) {
  switch (source.kind) {
    case SpaceKind::Bergman: return lp_norm_checked(value, source.p, source.alpha, grid, center);
    case SpaceKind::Dirichlet: break;
    case SpaceKind::Bloch: return {bloch(), 0.0};
  }
  throw std::logic_error("Dirichlet source norms are computed by the caller");
}

}  // namespace

ProbeResult ratio_sup(const OperatorSpec& op, const SpaceParams& source, const SpaceParams& target,
                      Family family, const std::vector<double>& a_grid, const QuadratureGrid& grid,
                      std::uint64_t seed, std::size_t random_count) {
  source.validate();
  target.validate();
  if (target.kind == SpaceKind::Bloch) throw std::invalid_argument("ratio_sup: target norm must be Bergman or Dirichlet");
  ProbeResult result;
  result.probe = "ratio_sup";
  result.columns = {"source_norm", "target_norm", "ratio", "grid_check"};
  result.primary = 2;
  result.parameters = {{"beta", op.beta()},    {"source_p", source.p}, {"source_alpha", source.alpha},
                       {"target_p", target.p}, {"target_alpha", target.alpha}};
  if (family == Family::RandomPoly) {
    result.param_name = "index";
    result.parameters.emplace_back("seed", static_cast<double>(seed));
    // Degree-64 polynomials: |f|^2 has angular degree 128 and radial degree 64.
    QuadratureGrid poly_grid = grid;
    poly_grid.radial = std::max<std::size_t>(grid.radial, 48);
    poly_grid.angular = std::max<std::size_t>(grid.angular, 512);
    result.rows = parallel_map<ProbeRow>(random_count, [&](std::size_t i) {
      const TaylorPoly f = random_poly(seed, i, source.p, source.alpha);
      const double norm_f = space_norm(source, f, poly_grid);
      const NormEstimate hf = target_norm(op, [&](double t) { return f.evaluate(t); }, target, poly_grid, 0.0);
      return ProbeRow{static_cast<double>(i), {norm_f, hf.norm, hf.norm / norm_f, hf.check}};
    });
  } else {
    check_parameter_grid(a_grid, "ratio_sup", false);
    result.rows = parallel_map<ProbeRow>(a_grid.size(), [&](std::size_t i) {
      const double a = a_grid[i];
      const TestFunction f = family == Family::BergmanF     ? bergman_f(a, source.p, source.alpha)
                             : family == Family::DirichletF ? dirichlet_f(a, source.p, source.alpha)
                                                            : log_g(a);
      NormEstimate nf;
      if (source.kind == SpaceKind::Dirichlet) {
        nf = lp_norm_checked([&](cplx z) { return f.derivative(z); }, source.p, source.alpha, grid, a);
        nf.norm += std::abs(f.value(0.0));
      } else {
        nf = source_norm(source, [&](cplx z) { return f.value(z); }, grid, a, [&] { return bloch_norm(f, grid); });
      }
      const NormEstimate hf = target_norm(op, [&](double t) { return f.value(t); }, target, grid, a);
      return ProbeRow{a, {nf.norm, hf.norm, hf.norm / nf.norm, std::max(nf.check, hf.check)}};
    });
  }
  result.notes.push_back("family " + to_string(family));
  finish(result);
  return result;
}

ProbeResult compactness_probe(const OperatorSpec& op, double s, const std::vector<double>& r_grid,
                              const SpaceParams& source, const std::vector<double>& a_grid,
                              const QuadratureGrid& grid) {
  check_parameter_grid(r_grid, "compactness_probe", true);
  source.validate();
  if (source.kind != SpaceKind::Bergman) throw std::invalid_argument("compactness_probe: source must be Bergman");
  if (!(s > 0.0)) throw std::invalid_argument("compactness_probe: need s > 0");
  const double p = source.p;
  const double alpha = source.alpha;
  // Exponent for which s-Carleson measures embed A^p_alpha into L^q.
  const double q = s * p / (alpha + 2.0);
  if (q < p) throw std::invalid_argument("compactness_probe: s must be at least alpha + 2");

  ProbeResult result;
  result.probe = "compactness_probe";
  result.param_name = "r";
  result.columns = {"carleson", "embedding_sup"};
  result.parameters = {{"s", s}, {"p", p}, {"alpha", alpha}, {"q", q}};
  const MeasureSpec& mu = op.measure();
  static constexpr double kKappa[] = {1.0, 0.5, 0.25, 0.1, 0.03, 0.01};
  result.rows = parallel_map<ProbeRow>(r_grid.size(), [&](std::size_t i) {
    const double r = r_grid[i];
    const MeasureSpec mu_r = mu.truncate_tail(r);
    const double gap = 1.0 - r;
    std::vector<double> t_grid = {r};
    if (gap > 1e-8 * 1.5) {
      const int count = std::max(2, static_cast<int>(std::ceil(10.0 * std::log10(gap / 1e-8))) + 1);
      t_grid = geometric_t_grid(gap, 1e-8, count);
    }
    const double carleson = carleson_constant(mu_r, CarlesonQuery{s, 0.0, t_grid}).constant_sup;
    std::vector<double> family = a_grid;
    for (double kappa : kKappa) family.push_back(1.0 - kappa * gap);
    double embedding = 0.0;
    for (double a : family) {
      if (!(a > 0.0 && a < 1.0)) continue;
      embedding = std::max(embedding, embedding_ratio(mu_r, bergman_f(a, p, alpha), q, p, alpha, grid));
    }
    return ProbeRow{r, {carleson, embedding}};
  });
  finish(result);
  std::vector<double> carleson_col;
  std::vector<double> embedding_col;
  for (const auto& row : result.rows) {
    carleson_col.push_back(row.values[0]);
    embedding_col.push_back(row.values[1]);
  }
  const Verdict vc = decay_verdict(carleson_col);
  const Verdict ve = decay_verdict(embedding_col);
  result.decay = vc == ve ? vc : Verdict::Inconclusive;
  result.notes.push_back("carleson column " + to_string(vc) + ", embedding column " + to_string(ve));
  return result;
}

}  // namespace genhilbert
