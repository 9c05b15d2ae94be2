#include "genhilbert/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "genhilbert/errors.hpp"

namespace genhilbert {

namespace {

void check_grid(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] < 1.0)) {
      throw std::invalid_argument(std::string(what) + ": grid points must lie in [0, 1)");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
    }
  }
}

double tail_ratio(double tail, double t, double exponent, double log_order) {
  if (tail == 0.0) return 0.0;
  double log_ratio = std::log(tail) - exponent * std::log1p(-t);
  if (log_order != 0.0) log_ratio += log_order * std::log(log_weight(t));
  return std::exp(log_ratio);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Vanishing: return "Vanishing";
    case Verdict::NonVanishing: return "NonVanishing";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<double> geometric_t_grid(double largest_gap, double smallest_gap, int count) {
  if (!(largest_gap <= 1.0 && smallest_gap > 0.0 && smallest_gap < largest_gap) || count < 2) {
    throw std::invalid_argument("geometric_t_grid: need 0 < smallest_gap < largest_gap <= 1, count >= 2");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double step = std::log(smallest_gap / largest_gap) / (count - 1);
  for (int i = 0; i < count; ++i) {
    const double gap = i + 1 == count ? smallest_gap : largest_gap * std::exp(step * i);
    grid[static_cast<std::size_t>(i)] = 1.0 - gap;
  }
  grid.front() = 1.0 - largest_gap;
  return grid;
}

Verdict decay_verdict(std::span<const double> values) {
  if (values.empty()) return Verdict::Inconclusive;
  const double first = values.front();
  const double last = values.back();
  if (first == 0.0) {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })
               ? Verdict::Vanishing
               : Verdict::NonVanishing;
  }
  if (last < 0.1 * first) return Verdict::Vanishing;
  if (last >= 0.9 * first) return Verdict::NonVanishing;
  return Verdict::Inconclusive;
}

CarlesonReport carleson_constant(const MeasureSpec& mu, const CarlesonQuery& query) {
  check_grid(query.t_grid, "carleson_constant");
  if (!(query.exponent > 0.0) || !(query.log_order >= 0.0)) {
    throw std::invalid_argument("carleson_constant: need exponent > 0 and log_order >= 0");
  }
  CarlesonReport report;
  report.exponent = query.exponent;
  report.log_order = query.log_order;
  report.rows.reserve(query.t_grid.size());
  for (double t : query.t_grid) {
    const double tail = mu.tail(t);
    report.rows.push_back({t, tail, tail_ratio(tail, t, query.exponent, query.log_order)});
  }
  for (const auto& row : report.rows) report.constant_sup = std::max(report.constant_sup, row.ratio);

  // Last decade of (1 - t) on the grid.
  const double last_gap = 1.0 - report.rows.back().t;
  std::size_t start = report.rows.size() - 1;
  while (start > 0 && 1.0 - report.rows[start - 1].t <= 10.0 * last_gap) --start;
  const double window_first = report.rows[start].ratio;
  const double last = report.rows.back().ratio;
  report.growth_detected = last > window_first * (1.0 + 1e-9);

  bool monotone = true;
  for (std::size_t i = start + 1; i < report.rows.size(); ++i) {
    if (report.rows[i].ratio > report.rows[i - 1].ratio * (1.0 + 1e-12)) monotone = false;
  }
  if (report.constant_sup == 0.0) {
    report.verdict = Verdict::Vanishing;
  } else if (monotone && last < 0.1 * report.constant_sup) {
    report.verdict = Verdict::Vanishing;
  } else if (last >= 0.9 * report.constant_sup) {
    report.verdict = Verdict::NonVanishing;
  } else {
    report.verdict = Verdict::Inconclusive;
  }

  if (query.t_grid.size() >= 3) {
    try {
      report.fit = fit_exponent(mu, query.t_grid);
    } catch (const DegenerateTail&) {
      report.fit.reset();
    }
  }
  return report;
}

ExponentFit fit_exponent(const MeasureSpec& mu, std::span<const double> t_grid) {
  check_grid(t_grid, "fit_exponent");
  if (t_grid.size() < 3) throw std::invalid_argument("fit_exponent: need at least 3 grid points");
  const auto n = static_cast<Eigen::Index>(t_grid.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = t_grid[static_cast<std::size_t>(i)];
    const double tail = mu.tail(t);
    if (!(tail > 0.0)) {
      throw DegenerateTail("tail vanishes at t = " + std::to_string(t) +
                           "; fall back to direct constant evaluation");
    }
    design(i, 0) = 1.0;
    design(i, 1) = std::log1p(-t);
    design(i, 2) = -std::log(log_weight(t));
    y[i] = std::log(tail);
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = design * coef - y;
  ExponentFit fit;
  fit.log_constant = coef[0];
  fit.exponent = coef[1];
  fit.log_order = coef[2];
  fit.rms_residual = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  return fit;
}

VanishingProbe vanishing_probe(const MeasureSpec& mu, double s, std::span<const double> r_grid,
                               double log_order) {
  check_grid(r_grid, "vanishing_probe");
  // Common evaluation grid: every r plus 20 points per decade of (1 - t).
  std::vector<double> grid = geometric_t_grid(1.0, 1e-8, 161);
  grid.insert(grid.end(), r_grid.begin(), r_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> ratio(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ratio[i] = tail_ratio(mu.tail(grid[i]), grid[i], s, log_order);
  }
  // Suffix suprema, so the reported sequence is nonincreasing in r.
  std::vector<double> suffix(grid.size());
  double running = 0.0;
  for (std::size_t i = grid.size(); i-- > 0;) {
    running = std::max(running, ratio[i]);
    suffix[i] = running;
  }
  VanishingProbe probe;
  for (double r : r_grid) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), r);
    probe.r.push_back(r);
    probe.sup.push_back(suffix[static_cast<std::size_t>(it - grid.begin())]);
  }
  probe.verdict = decay_verdict(probe.sup);
  return probe;
}

double conjugate_index(double q) {
  if (!(q > 1.0)) throw InvalidCase("conjugate index q' = q/(q-1) needs q > 1");
  return q / (q - 1.0);
}

std::string to_string(TheoremCase c) {
  switch (c) {
    case TheoremCase::T31_i: return "T31_i";
    case TheoremCase::T31_ii: return "T31_ii";
    case TheoremCase::T31_iii: return "T31_iii";
    case TheoremCase::T41_necessary: return "T41_necessary";
    case TheoremCase::T41_sufficient: return "T41_sufficient";
    case TheoremCase::T41_q1: return "T41_q1";
    case TheoremCase::T43_necessary: return "T43_necessary";
    case TheoremCase::T43_sufficient: return "T43_sufficient";
    case TheoremCase::T401: return "T401";
    case TheoremCase::T403: return "T403";
  }
  return "?";
}

TheoremCase theorem_case_from_string(const std::string& name) {
  for (auto c : {TheoremCase::T31_i, TheoremCase::T31_ii, TheoremCase::T31_iii, TheoremCase::T41_necessary,
                 TheoremCase::T41_sufficient, TheoremCase::T41_q1, TheoremCase::T43_necessary,
                 TheoremCase::T43_sufficient, TheoremCase::T401, TheoremCase::T403}) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown theorem case '" + name + "'");
}

CarlesonCondition threshold_exponent(const ThresholdQuery& q) {
  const double p = q.p;
  const double a = q.alpha;
  if (!(p > 0.0)) throw InvalidCase("need p > 0");
  if (!(a > -1.0)) throw InvalidCase("need alpha > -1");
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw InvalidCase(to_string(q.theorem_case) + " requires " + what);
  };
  switch (q.theorem_case) {
    case TheoremCase::T31_i:
      require(p <= 1.0, "0 < p <= 1");
      return {(a + 2.0) / p, 0.0};
    case TheoremCase::T31_ii:
      require(p >= 1.0 && p <= 2.0, "1 <= p <= 2");
      return {(a + 2.0 - (p - 1.0) * (p - 1.0)) / p, 0.0};
    case TheoremCase::T31_iii:
      require(p >= 2.0, "p >= 2");
      return {(a + 1.0) / p, 0.0};
    case TheoremCase::T41_necessary:
    case TheoremCase::T41_sufficient: {
      require(q.q >= p && q.q > 1.0, "q >= p and q > 1");
      require(q.beta > 1.0, "beta > 1");
      const double qc = conjugate_index(q.q);
      if (q.theorem_case == TheoremCase::T41_necessary) return {(a + 2.0) / p + q.beta / qc, 0.0};
      return {std::max(a + 2.0, q.beta) * (1.0 / p + 1.0 / qc), 0.0};
    }
    case TheoremCase::T41_q1:
      require(q.q == 1.0 && p <= 1.0, "q = 1 and p <= q");
      require(q.beta > 1.0, "beta > 1");
      return {(a + 2.0) / p, 1.0};
    case TheoremCase::T43_necessary:
    case TheoremCase::T43_sufficient: {
      require(q.q > 1.0 && p <= q.q, "q > 1 and 0 < p <= q");
      require(a > p - 1.0, "alpha > p - 1");
      require(q.beta > q.q, "beta > q");
      const double qc = conjugate_index(q.q);
      if (q.theorem_case == TheoremCase::T43_necessary) {
        return {(a + 2.0) / p + (q.beta + 1.0) / qc - 1.0, 0.0};
      }
      return {std::max(a + 2.0 - p, q.beta + 1.0) * (1.0 / p + 1.0 / qc), 0.0};
    }
    case TheoremCase::T401:
      require(q.q >= p && q.q >= 1.0, "q >= p and q >= 1");
      if (q.q == 1.0) return {(a + 2.0) / p, 1.0};
      return {(a + 2.0) / p + (a + 2.0) / conjugate_index(q.q), 0.0};
    case TheoremCase::T403: {
      require(q.q > 1.0 && p <= q.q, "q > 1 and 0 < p <= q");
      require(a > p - 1.0, "alpha > p - 1");
      const double qc = conjugate_index(q.q);
      return {(a + 2.0 - p) / p + (a + 2.0 - p) / qc, 0.0};
    }
  }
  throw InvalidCase("unknown theorem case");
}

}  // namespace genhilbert
