#pragma once

/**
 * @file cohomology.hpp
 * @brief Low-degree cohomology of finite groups given by multiplication
 * tables, with trivial F_p coefficients: inhomogeneous cochains, the
 * coboundaries d1 and d2, cup products of 1-cocycles, inflation along
 * surjections, and coboundary solving by linear algebra over F_p.
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "galmod/extgroup.hpp"
#include "galmod/fp.hpp"

namespace galmod {

class FiniteGroupTable {
public:
  /// table[a * order + b] = a * b. Validates closure, identity, inverses and
  /// associativity (exhaustive up to `assoc_guard` elements, 100000 seeded
  /// random triples beyond). Throws ParamError.
  FiniteGroupTable(std::size_t order, std::vector<std::uint32_t> table, std::uint32_t identity,
                   std::string name = {}, std::size_t assoc_guard = 200);

  /// Z/m with index k standing for k.
  static FiniteGroupTable cyclic(std::uint32_t m);
  /// (Z/p)^rank; index = sum of coordinate_i p^i.
  static FiniteGroupTable elementary_abelian(std::uint32_t p, std::uint32_t rank);
  /// The multiplication table of an extension group (indices as in ExtGroup).
  static FiniteGroupTable from_ext_group(const ExtGroup &g, std::uint64_t guard = 100'000);

  const std::string &name() const { return name_; }
  std::uint64_t size() const { return order_; }
  std::uint64_t multiply(std::uint64_t a, std::uint64_t b) const {
    return table_[a * order_ + b];
  }
  std::uint64_t identity_index() const { return identity_; }
  std::uint64_t inverse_index(std::uint64_t a) const { return inverse_[a]; }
  /// A small generating set, chosen greedily by smallest index.
  std::vector<std::uint64_t> generator_indices() const { return generators_; }

private:
  std::size_t order_;
  std::vector<std::uint32_t> table_;
  std::uint32_t identity_;
  std::string name_;
  std::vector<std::uint32_t> inverse_;
  std::vector<std::uint64_t> generators_;
};

using GroupPtr = std::shared_ptr<const FiniteGroupTable>;

/// A function G^k -> F_p stored densely (entry index = sum g_i N^{i}).
class Cochain {
public:
  /// The zero cochain of degree 1, 2 or 3.
  Cochain(GroupPtr group, std::uint32_t degree, fp::Residue p);

  const GroupPtr &group() const { return group_; }
  std::uint32_t degree() const { return degree_; }
  fp::Residue prime() const { return p_; }
  const std::vector<fp::Residue> &values() const { return values_; }

  fp::Residue at(std::uint64_t g1) const;
  fp::Residue at(std::uint64_t g1, std::uint64_t g2) const;
  fp::Residue at(std::uint64_t g1, std::uint64_t g2, std::uint64_t g3) const;
  void set(std::uint64_t g1, std::int64_t value);
  void set(std::uint64_t g1, std::uint64_t g2, std::int64_t value);
  void set_flat(std::size_t index, std::int64_t value);

  Cochain operator+(const Cochain &rhs) const;
  Cochain operator-(const Cochain &rhs) const;
  Cochain scaled(fp::Residue c) const;
  bool operator==(const Cochain &rhs) const;
  bool is_zero() const;

private:
  void require_compatible(const Cochain &rhs) const;

  GroupPtr group_;
  std::uint32_t degree_;
  fp::Residue p_;
  std::vector<fp::Residue> values_;
};

/// d1 h (g1, g2) = h(g1) + h(g2) - h(g1 g2).
Cochain d1(const Cochain &h);
/// d2 c (g1, g2, g3) = c(g2, g3) - c(g1 g2, g3) + c(g1, g2 g3) - c(g1, g2).
Cochain d2(const Cochain &c);

bool is_1cocycle(const Cochain &h);
bool is_2cocycle(const Cochain &c);

/// (phi u psi)(g1, g2) = phi(g1) psi(g2). Throws ParamError unless both
/// arguments are 1-cocycles on the same group.
Cochain cup11(const Cochain &phi, const Cochain &psi);

class GroupSurjection {
public:
  /// Throws ParamError unless `map` is a surjective homomorphism.
  GroupSurjection(GroupPtr domain, GroupPtr codomain, std::vector<std::uint64_t> map);

  const GroupPtr &domain() const { return domain_; }
  const GroupPtr &codomain() const { return codomain_; }
  std::uint64_t operator()(std::uint64_t g) const { return map_[g]; }

private:
  GroupPtr domain_;
  GroupPtr codomain_;
  std::vector<std::uint64_t> map_;
};

/// c o (pi x ... x pi). Degree 1 or 2.
Cochain inflate(const Cochain &c, const GroupSurjection &pi);

struct CoboundarySolve {
  std::optional<Cochain> h;
  std::size_t rank_a = 0;
  std::size_t rank_augmented = 0;
};

/// Solve d1 h = c. Throws ParamError unless c is a 2-cocycle.
CoboundarySolve solve_coboundary(const Cochain &c);

/// Whether c1 - c2 is a coboundary.
bool classes_equal(const Cochain &c1, const Cochain &c2);

/// The F_p-valued factor set of an extension on the cyclic group of order
/// p^n: (j1, j2) -> [j1 + j2 >= p^n] for the non-split flavor, zero for the
/// split one.
Cochain factor_set(const ExtGroup &g);

struct ConventionCheck {
  std::string order;
  int sign = 1;
  bool matches = false;
};

struct BassTateReport {
  std::uint32_t p = 0;
  bool cup_is_cocycle = false;
  bool cup_not_coboundary = false;
  std::size_t cup_rank_a = 0;
  std::size_t cup_rank_augmented = 0;
  bool inflation_is_coboundary = false;
  std::optional<Cochain> h;
  std::vector<ConventionCheck> conventions;
  /// first matching convention, if any
  std::optional<ConventionCheck> convention;
  bool control_not_coboundary = false;

  bool all_pass() const {
    return cup_is_cocycle && cup_not_coboundary && inflation_is_coboundary &&
           convention.has_value() && control_not_coboundary;
  }
};

/// The group-level coboundary check on H_{p^3} = A_2 x| G_1. Requires
/// p in {3, 5}.
BassTateReport bass_tate_skeleton(std::uint32_t p);

} // namespace galmod
