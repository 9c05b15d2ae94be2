#include "genhilbert/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace genhilbert::quad {

namespace {

// Three-term recurrence of the monic Jacobi polynomials on [-1, 1] for the
// weight (1 - x)^a (1 + x)^b, fed to the Golub-Welsch eigenproblem.
GaussRule golub_welsch_jacobi(std::size_t n, double a, double b) {
  Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 0 ? n - 1 : 0));
  const double ab = a + b;
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    if (k == 0) {
      diag[0] = (b - a) / (ab + 2.0);
    } else {
      diag[static_cast<Eigen::Index>(k)] = (b * b - a * a) / (s * (s + 2.0));
    }
    if (k + 1 < n) {
      const double m = kk + 1.0;
      const double t = 2.0 * m + ab;
      double beta = 4.0 * m * (m + a) * (m + b) * (m + ab) / (t * t * (t + 1.0) * (t - 1.0));
      if (m == 1.0) {
        // t - 1 = a + b + 1 may be tiny; use the closed form for the first entry.
        beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      }
      sub[static_cast<Eigen::Index>(k)] = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Golub-Welsch eigenproblem failed");
  }
  // Total mass of the weight on [-1, 1].
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  GaussRule rule;
  rule.weight_exponent_a = a;
  rule.weight_exponent_b = b;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const double v0 = solver.eigenvectors()(0, idx);
    rule.nodes[i] = solver.eigenvalues()[idx];
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

GaussRule gauss_jacobi_unit(std::size_t n, double a, double b) {
  if (n == 0) throw std::invalid_argument("gauss_jacobi_unit: need at least one node");
  if (!(a > -1.0) || !(b > -1.0)) {
    throw std::invalid_argument("gauss_jacobi_unit: weight exponents must exceed -1");
  }
  // On [-1,1] the weight (1-xi)^a (1+xi)^b; x = (1+xi)/2 gives (1-x)^a x^b
  // times 2^(a+b), and dx = dxi / 2.
  GaussRule rule = golub_welsch_jacobi(n, a, b);
  const double scale = std::exp(-(a + b + 1.0) * std::log(2.0));
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (1.0 + rule.nodes[i]);
    rule.weights[i] *= scale;
  }
  return rule;
}

const GaussRule& cached_gauss_jacobi_unit(std::size_t n, double a, double b) {
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, double, double>, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, a, b}];
  if (!slot) slot = std::make_unique<GaussRule>(gauss_jacobi_unit(n, a, b));
  return *slot;
}

}  // namespace genhilbert::quad
