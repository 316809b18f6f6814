#pragma once

/**
 * @file pmodule.hpp
 * @brief Finite F_p[G_n]-modules presented as direct sums of the
 * indecomposables A_l = F_p[G_n]/(t^l).
 *
 * An element is a flat coordinate vector: block b occupies coordinates
 * offset(b) .. offset(b) + l_b - 1, and coordinate offset(b) + k is the
 * coefficient of t^k times the generator of block b.
 */

#include <cstdint>
#include <span>
#include <vector>

#include "galmod/fp_matrix.hpp"
#include "galmod/gring.hpp"

namespace galmod {

class ModuleShape {
public:
  /// Every block length must lie in [1, p^n] and there must be at least one block.
  ModuleShape(const RingParams &params, std::vector<std::uint32_t> blocks);

  const RingParams &params() const { return params_; }
  std::span<const std::uint32_t> blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::uint32_t block_length(std::size_t b) const { return blocks_[b]; }
  std::size_t offset(std::size_t b) const { return offsets_[b]; }
  std::size_t dimension() const { return dimension_; }

  /// p^dimension, or GuardError if it exceeds `guard`.
  std::uint64_t cardinality(std::uint64_t guard) const;

  bool operator==(const ModuleShape &) const = default;

private:
  RingParams params_;
  std::vector<std::uint32_t> blocks_;
  std::vector<std::size_t> offsets_;
  std::size_t dimension_ = 0;
};

class ModuleElement {
public:
  /// The zero element.
  explicit ModuleElement(const ModuleShape &shape);
  /// From a flat coordinate vector (reduced mod p).
  ModuleElement(const ModuleShape &shape, std::vector<std::int64_t> coords);

  /// Generator 1 of block b.
  static ModuleElement generator(const ModuleShape &shape, std::size_t b);
  /// t^k times the generator of block b.
  static ModuleElement basis(const ModuleShape &shape, std::size_t b, std::uint32_t k);
  /// Decode the base-p integer `index` (coordinate 0 least significant).
  static ModuleElement from_index(const ModuleShape &shape, std::uint64_t index);

  const ModuleShape &shape() const { return shape_; }
  std::span<const fp::Residue> coords() const { return coords_; }
  fp::Residue coord(std::size_t i) const { return coords_[i]; }
  std::span<const fp::Residue> block(std::size_t b) const;

  std::uint64_t index() const;

  ModuleElement operator+(const ModuleElement &rhs) const;
  ModuleElement operator-(const ModuleElement &rhs) const;
  ModuleElement operator-() const;
  ModuleElement scaled(fp::Residue c) const;
  bool operator==(const ModuleElement &rhs) const = default;

  bool is_zero() const;

private:
  ModuleShape shape_;
  std::vector<fp::Residue> coords_;
};

/// f * m, computed blockwise as truncated products.
ModuleElement act(const GroupRingElement &f, const ModuleElement &m);

/// Multiplication by t = sigma - 1.
ModuleElement apply_t(const ModuleElement &m);

/// Length of a single block vector of length `block_len`: 0 for zero,
/// otherwise block_len minus the index of its lowest nonzero entry.
std::uint32_t block_vector_length(std::span<const fp::Residue> v);

/// Valuation of a block vector viewed as an element of A_l; INF for zero.
LValue block_vector_valuation(std::span<const fp::Residue> v);

/// Dimension of the cyclic submodule <m>; 0 for m = 0.
std::uint32_t length(const ModuleElement &m);

/// Length of a raw coordinate vector in the given shape (hot-path variant).
std::uint32_t length_of(const ModuleShape &shape, std::span<const fp::Residue> coords);

std::uint32_t cyclic_dimension(const ModuleElement &m);

/// All p^{length(m)} elements of <m>. Throws GuardError above `guard`.
std::vector<ModuleElement> cyclic_elements(const ModuleElement &m,
                                           std::uint64_t guard = 10'000'000);

/// A square matrix u over F_p representing sigma - 1 on F_p^d, with u^{p^n} = 0.
class NilpotentAction {
public:
  /// Throws ParamError unless u is square, over F_p, and u^{p^n} = 0.
  NilpotentAction(const RingParams &params, FpMatrix u);

  const RingParams &params() const { return params_; }
  const FpMatrix &matrix() const { return u_; }
  std::size_t dimension() const { return u_.rows(); }

private:
  RingParams params_;
  FpMatrix u_;
};

/// Matrix of t acting on the coordinates of `shape` (column convention:
/// column j is the image of basis vector j).
FpMatrix action_matrix(const ModuleShape &shape);

/// Block lengths of the indecomposable decomposition, sorted descending.
/// Multiplicity of A_l is r_{l-1} - 2 r_l + r_{l+1} with r_k = rank(u^k).
std::vector<std::uint32_t> decompose(const NilpotentAction &action);

} // namespace galmod
