#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "json.hpp"

namespace genhilbert {

using cplx = std::complex<double>;

/// Truncated Taylor series a_0 + a_1 z + ... + a_N z^N. The empty
/// coefficient vector is the zero function.
class TaylorPoly {
 public:
  TaylorPoly() = default;
  explicit TaylorPoly(std::vector<cplx> coeffs);

  static TaylorPoly constant(cplx c);
  static TaylorPoly monomial(std::size_t k, cplx c = 1.0);
  static TaylorPoly from_real(const std::vector<double>& coeffs);

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  /// Index of the last stored coefficient; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  /// a_k, or zero past the stored range.
  cplx operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : cplx{}; }
  bool has_real_coefficients() const;

  /// Horner evaluation.
  cplx evaluate(cplx z) const;
  cplx operator()(cplx z) const { return evaluate(z); }

  TaylorPoly derivative() const;
  /// Primitive with the given value at 0.
  TaylorPoly antiderivative(cplx constant = 0.0) const;

  TaylorPoly operator+(const TaylorPoly& other) const;
  TaylorPoly operator-(const TaylorPoly& other) const;
  TaylorPoly operator*(cplx scalar) const;

 private:
  std::vector<cplx> coeffs_;
};

inline TaylorPoly operator*(cplx scalar, const TaylorPoly& f) { return f * scalar; }

/// JSON array of [re, im] pairs.
void to_json(nlohmann::json& j, const TaylorPoly& f);
void from_json(const nlohmann::json& j, TaylorPoly& f);

}  // namespace genhilbert
