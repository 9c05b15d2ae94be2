#include "genhilbert/spaces.hpp"

#include <algorithm>
#include <stdexcept>

namespace genhilbert {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Bergman: return "Bergman";
    case SpaceKind::Dirichlet: return "Dirichlet";
    case SpaceKind::Bloch: return "Bloch";
  }
  return "?";
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "Bergman") return SpaceKind::Bergman;
  if (name == "Dirichlet") return SpaceKind::Dirichlet;
  if (name == "Bloch") return SpaceKind::Bloch;
  throw std::invalid_argument("unknown space kind '" + name + "'");
}

void SpaceParams::validate() const {
  if (kind == SpaceKind::Bloch) return;
  if (!(p > 0.0)) throw std::invalid_argument("space exponent p must be positive");
  if (!(alpha > -1.0)) throw std::invalid_argument("space weight alpha must exceed -1");
}

double bergman_norm(const TaylorPoly& f, double p, double alpha, const QuadratureGrid& grid) {
  return bergman_norm_of([&](cplx z) { return f.evaluate(z); }, p, alpha, grid);
}

double dirichlet_norm(const TaylorPoly& f, double p, double alpha, const QuadratureGrid& grid) {
  const TaylorPoly df = f.derivative();
  const double derivative_part = df.empty() ? 0.0 : bergman_norm(df, p, alpha, grid);
  return std::abs(f[0]) + derivative_part;
}

double bergman_norm(const TestFunction& f, double p, double alpha, const QuadratureGrid& grid, cplx center) {
  return bergman_norm_of([&](cplx z) { return f.value(z); }, p, alpha, grid, center);
}

double dirichlet_norm(const TestFunction& f, double p, double alpha, const QuadratureGrid& grid,
                      cplx center) {
  return std::abs(f.value(0.0)) +
         bergman_norm_of([&](cplx z) { return f.derivative(z); }, p, alpha, grid, center);
}

std::vector<double> bloch_radii(const QuadratureGrid& grid) {
  grid.validate();
  std::vector<double> radii;
  for (double x : quad::cached_gauss_jacobi_unit(grid.radial, 0.0, 0.0).nodes) radii.push_back(std::sqrt(x));
  for (int i = 0; i <= 60; ++i) radii.push_back(1.0 - std::pow(10.0, -0.1 * i));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

namespace {

template <class DF>
double bloch_seminorm(DF&& df, const QuadratureGrid& grid) {
  const std::vector<double> radii = bloch_radii(grid);
  const std::vector<cplx> roots = detail::unit_roots(grid.angular);
  const auto per_radius = parallel_map<double>(radii.size(), [&](std::size_t j) {
    const double r = radii[j];
    double best = 0.0;
    for (const cplx& u : roots) best = std::max(best, (1.0 - r * r) * std::abs(df(r * u)));
    return best;
  });
  return *std::max_element(per_radius.begin(), per_radius.end());
}

}  // namespace

double bloch_norm(const TaylorPoly& f, const QuadratureGrid& grid) {
  const TaylorPoly df = f.derivative();
  if (df.empty()) return std::abs(f[0]);
  return std::abs(f[0]) + bloch_seminorm([&](cplx z) { return df.evaluate(z); }, grid);
}

double bloch_norm(const TestFunction& f, const QuadratureGrid& grid) {
  return std::abs(f.value(0.0)) + bloch_seminorm([&](cplx z) { return f.derivative(z); }, grid);
}

double space_norm(const SpaceParams& space, const TestFunction& f, const QuadratureGrid& grid, cplx center) {
  space.validate();
  switch (space.kind) {
    case SpaceKind::Bergman: return bergman_norm(f, space.p, space.alpha, grid, center);
    case SpaceKind::Dirichlet: return dirichlet_norm(f, space.p, space.alpha, grid, center);
    case SpaceKind::Bloch: return bloch_norm(f, grid);
  }
  return 0.0;
}

double space_norm(const SpaceParams& space, const TaylorPoly& f, const QuadratureGrid& grid) {
  space.validate();
  switch (space.kind) {
    case SpaceKind::Bergman: return bergman_norm(f, space.p, space.alpha, grid);
    case SpaceKind::Dirichlet: return dirichlet_norm(f, space.p, space.alpha, grid);
    case SpaceKind::Bloch: return bloch_norm(f, grid);
  }
  return 0.0;
}

CoeffDecayReport coeff_decay_report(const TaylorPoly& f, double p, double alpha) {
  if (!(p > 0.0) || !(alpha > -1.0)) throw std::invalid_argument("coeff_decay_report: need p > 0, alpha > -1");
  CoeffDecayReport report;
  report.ratio_exponent = p <= 1.0 ? (alpha + 2.0) / p - 1.0 : (alpha + 1.0) / p;
  double sum = 0.0;
  for (std::size_t n = 1; n < f.size(); ++n) {
    const double nn = static_cast<double>(n);
    const double mag = std::abs(f[n]);
    report.ratios.push_back(mag / std::pow(nn, report.ratio_exponent));
    sum += std::pow(nn, p - alpha - 3.0) * std::pow(mag, p);
    report.partial_sums.push_back(sum);
  }
  const std::size_t n = report.ratios.size();
  report.enough_terms = n >= 8;
  if (!report.enough_terms) return report;
  auto mean = [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += report.ratios[i];
    return s / static_cast<double>(hi - lo);
  };
  report.ratios_decreasing = mean(3 * n / 4, n) < mean(n / 4, n / 2);
  const double total = report.partial_sums.back();
  const double half = report.partial_sums[n / 2 - 1];
  report.partial_sums_settle = total == 0.0 || (total - half) <= 1e-3 * total;
  report.non_decay_flag = !report.ratios_decreasing && !report.partial_sums_settle;
  return report;
}

}  // namespace genhilbert
