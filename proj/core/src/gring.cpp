#include "galmod/gring.hpp"

#include <utility>

#include "galmod/error.hpp"

namespace galmod {

RingParams::RingParams(std::uint32_t p, std::uint32_t n) : p_(p), n_(n), order_(0) {
  if (p < 3 || !fp::is_prime(p))
    throw ParamError("RingParams: p must be an odd prime, got " + std::to_string(p));
  if (n < 1)
    throw ParamError("RingParams: n must be at least 1");
  std::uint64_t order = 0;
  if (!fp::checked_pow(p, n, order) || order >= (std::uint64_t{1} << 31))
    throw ParamError("RingParams: p^n must be below 2^31");
  order_ = static_cast<std::uint32_t>(order);
}

std::string LValue::to_string() const {
  return is_inf() ? std::string("inf") : std::to_string(raw_);
}

LValue lstar(LValue i, LValue j, const RingParams &params) {
  if (i.is_inf() || j.is_inf())
    return LValue::inf();
  const std::uint64_t s = std::uint64_t{i.value()} + j.value();
  if (s > params.order() - 1)
    return LValue::inf();
  return LValue(static_cast<std::uint32_t>(s));
}

GroupRingElement::GroupRingElement(const RingParams &params)
    : params_(params), coeffs_(params.order(), 0) {}

GroupRingElement::GroupRingElement(const RingParams &params,
                                   std::vector<std::int64_t> coeffs)
    : params_(params), coeffs_(params.order(), 0) {
  if (coeffs.size() > params.order())
    throw ParamError("GroupRingElement: more than p^n coefficients");
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    coeffs_[k] = fp::reduce(coeffs[k], params.p());
}

GroupRingElement GroupRingElement::zero(const RingParams &params) {
  return GroupRingElement(params);
}

GroupRingElement GroupRingElement::one(const RingParams &params) {
  return t_power(params, 0);
}

GroupRingElement GroupRingElement::t(const RingParams &params) {
  return t_power(params, 1);
}

GroupRingElement GroupRingElement::t_power(const RingParams &params, std::uint64_t k) {
  GroupRingElement out(params);
  if (k < params.order())
    out.coeffs_[k] = 1;
  return out;
}

GroupRingElement GroupRingElement::sigma_power(const RingParams &params, std::int64_t j) {
  const auto order = static_cast<std::int64_t>(params.order());
  const std::int64_t jr = ((j % order) + order) % order;
  GroupRingElement out(params);
  for (std::int64_t k = 0; k <= jr && k < order; ++k)
    out.coeffs_[k] = fp::binom_mod(static_cast<std::uint64_t>(jr),
                                   static_cast<std::uint64_t>(k), params.p());
  return out;
}

GroupRingElement GroupRingElement::scalar(const RingParams &params, std::int64_t c) {
  GroupRingElement out(params);
  out.coeffs_[0] = fp::reduce(c, params.p());
  return out;
}

namespace {

void require_same(const RingParams &a, const RingParams &b) {
  if (!(a == b))
    throw ParamError("GroupRingElement: operands live in different rings");
}

} // namespace

GroupRingElement GroupRingElement::operator+(const GroupRingElement &rhs) const {
  require_same(params_, rhs.params_);
  GroupRingElement out(params_);
  const auto p = params_.p();
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    out.coeffs_[k] = fp::add(coeffs_[k], rhs.coeffs_[k], p);
  return out;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement &rhs) const {
  return *this + (-rhs);
}

GroupRingElement GroupRingElement::operator-() const {
  GroupRingElement out(params_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    out.coeffs_[k] = fp::neg(coeffs_[k], params_.p());
  return out;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement &rhs) const {
  require_same(params_, rhs.params_);
  const std::size_t order = coeffs_.size();
  const auto p = params_.p();
  std::vector<std::uint64_t> acc(order, 0);
  for (std::size_t i = 0; i < order; ++i) {
    const fp::Residue a = coeffs_[i];
    if (a == 0)
      continue;
    for (std::size_t j = 0; i + j < order; ++j) {
      const fp::Residue b = rhs.coeffs_[j];
      if (b != 0)
        acc[i + j] = (acc[i + j] + std::uint64_t{a} * b) % p;
    }
  }
  GroupRingElement out(params_);
  for (std::size_t k = 0; k < order; ++k)
    out.coeffs_[k] = static_cast<fp::Residue>(acc[k]);
  return out;
}

GroupRingElement GroupRingElement::scaled(fp::Residue c) const {
  GroupRingElement out(params_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    out.coeffs_[k] = fp::mul(coeffs_[k], c % params_.p(), params_.p());
  return out;
}

GroupRingElement GroupRingElement::pow(std::uint64_t e) const {
  GroupRingElement result = one(params_);
  GroupRingElement base = *this;
  while (e > 0) {
    if (e & 1U)
      result = result * base;
    e >>= 1U;
    if (e > 0)
      base = base * base;
  }
  return result;
}

bool GroupRingElement::is_zero() const {
  for (auto c : coeffs_)
    if (c != 0)
      return false;
  return true;
}

GroupRingElement add(const GroupRingElement &f, const GroupRingElement &g) { return f + g; }
GroupRingElement mul(const GroupRingElement &f, const GroupRingElement &g) { return f * g; }

LValue valuation(const GroupRingElement &f) {
  const auto c = f.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0)
      return LValue(static_cast<std::uint32_t>(k));
  return LValue::inf();
}

bool is_unit(const GroupRingElement &f) { return f.coeff(0) != 0; }

GroupRingElement unit_inverse(const GroupRingElement &f) {
  if (!is_unit(f))
    throw DomainError("unit_inverse: element lies in the maximal ideal");
  // f = c(1 - x) with x in (t); 1/(1-x) = 1 + x + x^2 + ... (finite sum).
  const auto &params = f.params();
  const fp::Residue c = f.coeff(0);
  const fp::Residue cinv = fp::inv(c, params.p());
  const GroupRingElement x = GroupRingElement::one(params) - f.scaled(cinv);
  GroupRingElement sum = GroupRingElement::one(params);
  GroupRingElement term = GroupRingElement::one(params);
  for (std::uint32_t k = 1; k < params.order(); ++k) {
    term = term * x;
    if (term.is_zero())
      break;
    sum = sum + term;
  }
  return sum.scaled(cinv);
}

GroupRingElement from_sigma_basis(const RingParams &params,
                                  std::span<const std::int64_t> sigma_coeffs) {
  if (sigma_coeffs.size() != params.order())
    throw ParamError("from_sigma_basis: expected exactly p^n coefficients");
  const auto p = params.p();
  const std::size_t order = params.order();
  std::vector<std::int64_t> t_coeffs(order, 0);
  // sigma^k = sum_i C(k, i) t^i
  for (std::size_t k = 0; k < order; ++k) {
    const fp::Residue a = fp::reduce(sigma_coeffs[k], p);
    if (a == 0)
      continue;
    for (std::size_t i = 0; i <= k; ++i) {
      const fp::Residue b = fp::binom_mod(k, i, p);
      t_coeffs[i] = fp::add(static_cast<fp::Residue>(t_coeffs[i]), fp::mul(a, b, p), p);
    }
  }
  return GroupRingElement(params, std::move(t_coeffs));
}

std::vector<fp::Residue> to_sigma_basis(const GroupRingElement &f) {
  const auto &params = f.params();
  const auto p = params.p();
  const std::size_t order = params.order();
  std::vector<fp::Residue> out(order, 0);
  // t^i = sum_k C(i, k) (-1)^{i-k} sigma^k
  for (std::size_t i = 0; i < order; ++i) {
    const fp::Residue a = f.coeff(i);
    if (a == 0)
      continue;
    for (std::size_t k = 0; k <= i; ++k) {
      fp::Residue b = fp::binom_mod(i, k, p);
      if ((i - k) % 2 == 1)
        b = fp::neg(b, p);
      out[k] = fp::add(out[k], fp::mul(a, b, p), p);
    }
  }
  return out;
}

} // namespace galmod
