#pragma once

/**
 * @file gring.hpp
 * @brief The modular group ring F_p[G_n] of the cyclic group G_n = Z/p^n.
 *
 * Elements are stored in the (sigma - 1)-adic basis: coefficient k multiplies
 * t^k where t = sigma - 1. In this basis F_p[G_n] is the truncated
 * polynomial ring F_p[t]/(t^{p^n}), a local ring whose maximal ideal is (t).
 * The valuation v(f) is the index of the lowest nonzero coefficient and takes
 * values in the monoid L_n = {0, ..., p^n - 1} u {INF}.
 */

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "galmod/fp.hpp"

namespace galmod {

/// Prime p, exponent n and the cached group order p^n.
class RingParams {
public:
  /// Throws ParamError unless p >= 3 is prime, n >= 1 and p^n < 2^31.
  RingParams(std::uint32_t p, std::uint32_t n);

  std::uint32_t p() const { return p_; }
  std::uint32_t n() const { return n_; }
  std::uint32_t order() const { return order_; }

  bool operator==(const RingParams &) const = default;

private:
  std::uint32_t p_;
  std::uint32_t n_;
  std::uint32_t order_;
};

/// A value of the monoid L_n: either finite or INF.
class LValue {
public:
  static constexpr std::uint32_t kInfRaw = std::numeric_limits<std::uint32_t>::max();

  constexpr LValue() : raw_(kInfRaw) {}
  constexpr explicit LValue(std::uint32_t v) : raw_(v) {}
  static constexpr LValue inf() { return LValue(); }

  constexpr bool is_inf() const { return raw_ == kInfRaw; }
  /// Finite value; meaningless for INF.
  constexpr std::uint32_t value() const { return raw_; }

  // INF compares greater than every finite value.
  constexpr auto operator<=>(const LValue &) const = default;

  std::string to_string() const;

private:
  std::uint32_t raw_;
};

/// The monoid operation of L_n: finite sums that stay below p^n, INF otherwise.
LValue lstar(LValue i, LValue j, const RingParams &params);

class GroupRingElement {
public:
  /// The zero element.
  explicit GroupRingElement(const RingParams &params);
  /// From (sigma-1)-adic coefficients; shorter inputs are zero-padded,
  /// longer ones rejected. Entries are reduced mod p.
  GroupRingElement(const RingParams &params, std::vector<std::int64_t> coeffs);

  static GroupRingElement zero(const RingParams &params);
  static GroupRingElement one(const RingParams &params);
  /// t = sigma - 1.
  static GroupRingElement t(const RingParams &params);
  /// t^k (zero when k >= p^n).
  static GroupRingElement t_power(const RingParams &params, std::uint64_t k);
  /// sigma^j = (1 + t)^j for any integer j (reduced mod p^n).
  static GroupRingElement sigma_power(const RingParams &params, std::int64_t j);
  /// The element c * 1.
  static GroupRingElement scalar(const RingParams &params, std::int64_t c);

  const RingParams &params() const { return params_; }
  std::span<const fp::Residue> coeffs() const { return coeffs_; }
  fp::Residue coeff(std::size_t k) const { return coeffs_[k]; }

  GroupRingElement operator+(const GroupRingElement &rhs) const;
  GroupRingElement operator-(const GroupRingElement &rhs) const;
  GroupRingElement operator-() const;
  GroupRingElement operator*(const GroupRingElement &rhs) const;
  GroupRingElement scaled(fp::Residue c) const;
  GroupRingElement pow(std::uint64_t e) const;

  bool operator==(const GroupRingElement &rhs) const = default;

  bool is_zero() const;

private:
  RingParams params_;
  std::vector<fp::Residue> coeffs_;
};

GroupRingElement add(const GroupRingElement &f, const GroupRingElement &g);
GroupRingElement mul(const GroupRingElement &f, const GroupRingElement &g);

/// INF for zero, otherwise the index of the lowest nonzero coefficient.
LValue valuation(const GroupRingElement &f);

/// True iff f lies outside the maximal ideal (t).
bool is_unit(const GroupRingElement &f);

/// Multiplicative inverse of a unit; throws DomainError for nonunits.
GroupRingElement unit_inverse(const GroupRingElement &f);

/// Convert from coefficients of sigma^0, ..., sigma^{p^n-1}.
GroupRingElement from_sigma_basis(const RingParams &params,
                                  std::span<const std::int64_t> sigma_coeffs);
/// Coefficients of sigma^0, ..., sigma^{p^n-1}.
std::vector<fp::Residue> to_sigma_basis(const GroupRingElement &f);

} // namespace galmod
