#include "genhilbert/measure.hpp"

#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <boost/math/special_functions/beta.hpp>

namespace genhilbert {

struct MeasureSpec::MomentCache {
  std::mutex mutex;
  std::unordered_map<std::uint64_t, double> values;
};

namespace {

void validate(const Atom& a) {
  if (!(a.location >= 0.0 && a.location < 1.0)) {
    throw std::invalid_argument("atom location must lie in [0, 1), got " + std::to_string(a.location));
  }
  if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
    throw std::invalid_argument("atom weight must be positive and finite");
  }
}

void validate(const DensityTerm& d) {
  if (!(d.scale > 0.0) || !std::isfinite(d.scale)) {
    throw std::invalid_argument("density scale must be positive and finite");
  }
  if (!(d.power > -1.0) || !std::isfinite(d.power)) {
    throw std::invalid_argument("density power must exceed -1 for integrability, got " +
                                std::to_string(d.power));
  }
  if (!std::isfinite(d.log_power)) throw std::invalid_argument("density log_power must be finite");
  if (!(d.cutoff >= 0.0 && d.cutoff < 1.0)) {
    throw std::invalid_argument("density cutoff must lie in [0, 1)");
  }
}

constexpr double kLogTermTol = 1e-13;

// Integral of scale * exp(-(power+1) u) (ln2 + u)^delta over [u0, inf).
double log_term_tail(const DensityTerm& d, double u0) {
  const double decay = d.power + 1.0;
  auto w = [&](double u) {
    const double lw = std::log(d.scale) - decay * u + d.log_power * std::log(std::numbers::ln2 + u);
    return lw < -745.0 ? 0.0 : std::exp(lw);
  };
  quad::AdaptiveOptions opt;
  opt.rel_tol = kLogTermTol;
  return quad::gauss_kronrod_halfline<double>(w, u0, std::max(1.0, 1.0 / decay), opt).value;
}

}  // namespace

MeasureSpec::MeasureSpec() : cache_(std::make_shared<MomentCache>()) {}

MeasureSpec::MeasureSpec(std::vector<Atom> atoms, std::vector<DensityTerm> densities)
    : atoms_(std::move(atoms)), densities_(std::move(densities)), cache_(std::make_shared<MomentCache>()) {
  for (const auto& a : atoms_) validate(a);
  for (const auto& d : densities_) validate(d);
}

MeasureSpec MeasureSpec::lebesgue() { return MeasureSpec({}, {DensityTerm{1.0, 0.0, 0.0, 0.0}}); }

MeasureSpec MeasureSpec::atom(double location, double weight) {
  return MeasureSpec({Atom{location, weight}}, {});
}

MeasureSpec MeasureSpec::power_family(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("power_family: s must be positive");
  return MeasureSpec({}, {DensityTerm{s, s - 1.0, 0.0, 0.0}});
}

MeasureSpec MeasureSpec::log_power_family(double s, double delta) {
  if (!(s > 0.0)) throw std::invalid_argument("log_power_family: s must be positive");
  return MeasureSpec({}, {DensityTerm{s, s - 1.0, delta, 0.0}});
}

MeasureSpec MeasureSpec::log_carleson_family(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("log_carleson_family: s must be positive");
  // d/dx [x^s / L(x)] with L(x) = log(2/x) is s x^(s-1)/L + x^(s-1)/L^2.
  return MeasureSpec({}, {DensityTerm{s, s - 1.0, -1.0, 0.0}, DensityTerm{1.0, s - 1.0, -2.0, 0.0}});
}

double MeasureSpec::density_moment(std::size_t term, std::size_t n) const {
  const DensityTerm& d = densities_[term];
  const double a = static_cast<double>(n) + 1.0;
  const double b = d.power + 1.0;
  if (!d.has_log()) {
    if (d.cutoff == 0.0) return d.scale * boost::math::beta(a, b);
    return d.scale * boost::math::betac(a, b, d.cutoff);
  }
  const std::uint64_t key = (static_cast<std::uint64_t>(term) << 40) | n;
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
  }
  auto power = [n](double t) { return std::pow(t, static_cast<double>(n)); };
  const double value = detail::integrate_density<double>(d, power, kLogTermTol, 4000);
  std::lock_guard lock(cache_->mutex);
  cache_->values.emplace(key, value);
  return value;
}

double MeasureSpec::moment(std::size_t n) const {
  double sum = 0.0;
  for (const auto& a : atoms_) {
    sum += a.weight * (n == 0 ? 1.0 : std::pow(a.location, static_cast<double>(n)));
  }
  for (std::size_t i = 0; i < densities_.size(); ++i) sum += density_moment(i, n);
  return sum;
}

double MeasureSpec::tail(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("tail: t must be >= 0");
  if (t >= 1.0) return 0.0;
  double sum = 0.0;
  for (const auto& a : atoms_) {
    if (a.location >= t) sum += a.weight;
  }
  for (const auto& d : densities_) {
    const double from = std::max(t, d.cutoff);
    if (!d.has_log()) {
      const double b = d.power + 1.0;
      sum += d.scale * std::exp(b * std::log1p(-from)) / b;
    } else {
      sum += log_term_tail(d, -std::log1p(-from));
    }
  }
  return sum;
}

MeasureSpec MeasureSpec::truncate_tail(double r) const {
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("truncate_tail: r must lie in [0, 1)");
  std::vector<Atom> atoms;
  for (const auto& a : atoms_) {
    if (a.location > r) atoms.push_back(a);
  }
  std::vector<DensityTerm> densities = densities_;
  for (auto& d : densities) d.cutoff = std::max(d.cutoff, r);
  return MeasureSpec(std::move(atoms), std::move(densities));
}

MeasureSpec MeasureSpec::operator+(const MeasureSpec& other) const {
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  std::vector<DensityTerm> densities = densities_;
  densities.insert(densities.end(), other.densities_.begin(), other.densities_.end());
  return MeasureSpec(std::move(atoms), std::move(densities));
}

MeasureSpec MeasureSpec::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.weight *= factor;
  std::vector<DensityTerm> densities = densities_;
  for (auto& d : densities) d.scale *= factor;
  return MeasureSpec(std::move(atoms), std::move(densities));
}

}  // namespace genhilbert
