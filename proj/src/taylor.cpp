#include "genhilbert/taylor.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace genhilbert {

TaylorPoly::TaylorPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("TaylorPoly: coefficients must be finite");
    }
  }
}

TaylorPoly TaylorPoly::constant(cplx c) { return TaylorPoly({c}); }

TaylorPoly TaylorPoly::monomial(std::size_t k, cplx c) {
  std::vector<cplx> coeffs(k + 1);
  coeffs[k] = c;
  return TaylorPoly(std::move(coeffs));
}

TaylorPoly TaylorPoly::from_real(const std::vector<double>& coeffs) {
  return TaylorPoly(std::vector<cplx>(coeffs.begin(), coeffs.end()));
}

bool TaylorPoly::has_real_coefficients() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const cplx& c) { return c.imag() == 0.0; });
}

cplx TaylorPoly::evaluate(cplx z) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

TaylorPoly TaylorPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<cplx> out(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) out[k - 1] = static_cast<double>(k) * coeffs_[k];
  return TaylorPoly(std::move(out));
}

TaylorPoly TaylorPoly::antiderivative(cplx constant) const {
  std::vector<cplx> out(coeffs_.size() + 1);
  out[0] = constant;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
  return TaylorPoly(std::move(out));
}

TaylorPoly TaylorPoly::operator+(const TaylorPoly& other) const {
  std::vector<cplx> out(std::max(size(), other.size()));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (*this)[k] + other[k];
  return TaylorPoly(std::move(out));
}

TaylorPoly TaylorPoly::operator-(const TaylorPoly& other) const { return *this + other * cplx(-1.0); }

TaylorPoly TaylorPoly::operator*(cplx scalar) const {
  std::vector<cplx> out = coeffs_;
  for (auto& c : out) c *= scalar;
  return TaylorPoly(std::move(out));
}

void to_json(nlohmann::json& j, const TaylorPoly& f) {
  j = nlohmann::json::array();
  for (const auto& c : f.coeffs()) j.push_back({c.real(), c.imag()});
}

void from_json(const nlohmann::json& j, TaylorPoly& f) {
  if (!j.is_array()) throw std::invalid_argument("TaylorPoly JSON must be an array of [re, im] pairs");
  std::vector<cplx> coeffs;
  coeffs.reserve(j.size());
  for (const auto& pair : j) {
    if (pair.is_number()) {
      coeffs.emplace_back(pair.get<double>(), 0.0);
    } else if (pair.is_array() && pair.size() == 2 && pair[0].is_number() && pair[1].is_number()) {
      coeffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    } else {
      throw std::invalid_argument("TaylorPoly JSON entries must be [re, im] pairs");
    }
  }
  f = TaylorPoly(std::move(coeffs));
}

}  // namespace genhilbert
