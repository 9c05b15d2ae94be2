#include "genhilbert/disk_quadrature.hpp"

#include <stdexcept>

namespace genhilbert {

void QuadratureGrid::validate() const {
  if (radial == 0) throw std::invalid_argument("quadrature grid needs at least one radial node");
  if (angular < 2 || (angular & (angular - 1)) != 0) {
    throw std::invalid_argument("angular node count must be a power of two >= 2");
  }
  if (!(richardson_tol > 0.0)) throw std::invalid_argument("richardson_tol must be positive");
}

namespace detail {

std::vector<cplx> unit_roots(std::size_t count) {
  std::vector<cplx> roots(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    roots[k] = {std::cos(theta), std::sin(theta)};
  }
  return roots;
}

}  // namespace detail

}  // namespace genhilbert
