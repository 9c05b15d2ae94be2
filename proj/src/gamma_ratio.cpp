#include "genhilbert/gamma_ratio.hpp"

#include <cmath>
#include <stdexcept>

namespace genhilbert {

namespace {
void check_beta(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("gamma_ratio: beta must be positive");
}
}  // namespace

std::vector<double> gamma_ratio_sequence(std::size_t n, double beta) {
  check_beta(beta);
  std::vector<double> c(n + 1);
  c[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    c[k] = c[k - 1] * (kk - 1.0 + beta) / kk;
  }
  return c;
}

double gamma_ratio(std::size_t n, double beta) {
  check_beta(beta);
  double c = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    c = c * (kk - 1.0 + beta) / kk;
  }
  return c;
}

double gamma_ratio_lgamma(std::size_t n, double beta) {
  check_beta(beta);
  const double nn = static_cast<double>(n);
  return std::exp(std::lgamma(nn + beta) - std::lgamma(nn + 1.0) - std::lgamma(beta));
}

}  // namespace genhilbert
