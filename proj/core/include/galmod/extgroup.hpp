#pragma once

/**
 * @file extgroup.hpp
 * @brief The extensions A_l x| G_n (split) and A_l . G_n (non-split) of the
 * cyclic group G_n by the indecomposable module A_l.
 *
 * Elements are pairs (f, sigma^j) with f in A_l and j in [0, p^n). Both
 * flavors multiply as (f1 + sigma^{j1} f2, sigma^{j1+j2}); the non-split
 * flavor additionally adds t^{l-1} exactly when the unreduced exponent sum
 * j1 + j2 reaches p^n.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "galmod/group_invariants.hpp"
#include "galmod/gring.hpp"

namespace galmod {

enum class ExtFlavor { Split, Bullet };

std::string to_string(ExtFlavor flavor);
ExtFlavor parse_flavor(const std::string &name);

struct ExtElement {
  /// l residues in the (sigma-1)-adic basis of A_l
  std::vector<fp::Residue> f;
  std::uint32_t j = 0;

  bool operator==(const ExtElement &) const = default;
};

class ExtGroup {
public:
  /// Throws ParamError when l is outside [1, p^n], when the bullet flavor is
  /// requested for l = p^n, or when p^{l+n} does not fit in 64 bits.
  ExtGroup(const RingParams &params, std::uint32_t ell, ExtFlavor flavor);

  const RingParams &params() const { return params_; }
  std::uint32_t ell() const { return ell_; }
  ExtFlavor flavor() const { return flavor_; }
  /// p^{l+n}
  std::uint64_t order() const { return order_; }
  /// p^l
  std::uint64_t kernel_order() const { return kernel_order_; }

  /// Build an element; coefficients are reduced, j is reduced mod p^n.
  ExtElement element(const std::vector<std::int64_t> &f, std::int64_t j) const;
  ExtElement identity() const;

  ExtElement mul(const ExtElement &a, const ExtElement &b) const;
  ExtElement inverse(const ExtElement &g) const;
  /// m-fold product by repeated multiplication (square-and-multiply).
  ExtElement power(const ExtElement &g, std::uint64_t m) const;
  ExtElement commutator(const ExtElement &a, const ExtElement &b) const;

  /// sigma^j acting on a kernel vector.
  std::vector<fp::Residue> sigma_act(std::uint32_t j, const std::vector<fp::Residue> &f) const;

  bool contains(const ExtElement &g) const;

  // Index-level interface (index = j * p^l + base-p digits of f).
  std::uint64_t index_of(const ExtElement &g) const;
  ExtElement element_at(std::uint64_t index) const;
  std::uint64_t size() const { return order_; }
  std::uint64_t multiply(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t identity_index() const { return 0; }
  std::uint64_t inverse_index(std::uint64_t a) const;
  /// (1, sigma^0) and (0, sigma) generate the group.
  std::vector<std::uint64_t> generator_indices() const;

  bool operator==(const ExtGroup &rhs) const {
    return params_ == rhs.params_ && ell_ == rhs.ell_ && flavor_ == rhs.flavor_;
  }

private:
  void require_member(const ExtElement &g) const;

  RingParams params_;
  std::uint32_t ell_;
  ExtFlavor flavor_;
  std::uint64_t order_ = 0;
  std::uint64_t kernel_order_ = 0;
  // sigma_table_[j * ell_ + k] = C(j, k) mod p
  std::vector<fp::Residue> sigma_table_;
};

/// The carry count c_j(m): c_j(1) = 0 and c_j(m+1) = c_j(m) + 1 exactly when
/// (m j mod p^n) + j >= p^n. Requires m >= 1.
std::uint64_t carry(std::uint64_t j, std::uint64_t m, const RingParams &params);

/// (f, sigma^j)^m via the closed form
/// (sum_{k<m} sigma^{kj} f + c_j(m) t^{l-1} [bullet only], sigma^{mj}).
ExtElement power_closed_form(const ExtGroup &g, const ExtElement &x, std::uint64_t m);

/// Throws GuardError when the group order exceeds `guard`.
Fingerprint fingerprint(const ExtGroup &g, std::uint64_t guard = 1'000'000);

enum class NamedGroup { Hp3, Mp3, Mpn, ZpxZp, Zp2 };

std::string to_string(NamedGroup name);
NamedGroup parse_named_group(const std::string &name);

/// Whether a fingerprint matches the defining profile of a named p-group.
bool matches_profile(const Fingerprint &fp, std::uint32_t p, NamedGroup name);
bool is_named(const ExtGroup &g, NamedGroup name, std::uint64_t guard = 1'000'000);

/// A subgroup as a sorted list of element indices.
using SubgroupIndices = std::vector<std::uint64_t>;

/// All elementary abelian normal subgroups H of order p^l with G/H cyclic of
/// order p^n, searched inside Omega_1 = {g : g^p = 1}. Sorted lexicographically.
std::vector<SubgroupIndices> elem_abelian_normal_with_cyclic_quotient(const ExtGroup &g,
                                                                      std::uint64_t guard = 243);

} // namespace galmod
