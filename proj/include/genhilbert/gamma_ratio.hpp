#pragma once

#include <cstddef>
#include <vector>

namespace genhilbert {

/// Gamma(n + beta) / (n! Gamma(beta)) via c_0 = 1, c_n = c_{n-1} (n - 1 + beta) / n.
double gamma_ratio(std::size_t n, double beta);

/// Same quantity through log-Gamma, for cross-checking the recurrence.
double gamma_ratio_lgamma(std::size_t n, double beta);

/// c_0 .. c_n of the recurrence.
std::vector<double> gamma_ratio_sequence(std::size_t n, double beta);

}  // namespace genhilbert
