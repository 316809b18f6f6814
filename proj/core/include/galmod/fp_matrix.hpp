#pragma once

// Dense matrices over a prime field F_p, with row reduction, rank and
// linear solving. Elimination always pivots on the first nonzero entry of
// the current column, so results are deterministic.

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "galmod/fp.hpp"

namespace galmod {

class FpMatrix {
public:
  FpMatrix() = default;
  FpMatrix(std::size_t rows, std::size_t cols, fp::Residue p);

  static FpMatrix identity(std::size_t n, fp::Residue p);
  static FpMatrix from_rows(const std::vector<std::vector<fp::Residue>> &rows,
                            fp::Residue p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  fp::Residue prime() const { return p_; }

  fp::Residue operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  fp::Residue &operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  /// Entry setter that reduces its argument mod p.
  void set(std::size_t r, std::size_t c, std::int64_t value) {
    data_[r * cols_ + c] = fp::reduce(value, p_);
  }

  FpMatrix operator*(const FpMatrix &rhs) const;
  FpMatrix operator+(const FpMatrix &rhs) const;
  bool operator==(const FpMatrix &rhs) const = default;

  FpMatrix pow(std::size_t e) const;
  bool is_zero() const;

  /// Reduced row echelon form; returns the pivot columns.
  std::vector<std::size_t> rref_in_place();
  std::size_t rank() const;

  /// Inverse of a square matrix, or nullopt if singular.
  std::optional<FpMatrix> inverse() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  fp::Residue p_ = 2;
  std::vector<fp::Residue> data_;
};

/// Result of solving A x = b.
struct LinearSolve {
  std::optional<std::vector<fp::Residue>> solution;
  std::size_t rank_a = 0;
  std::size_t rank_augmented = 0;
};

/// Solve A x = b over F_p. When solvable, free variables are set to 0.
/// When not, rank_a < rank_augmented certifies inconsistency.
LinearSolve solve_linear(const FpMatrix &a, const std::vector<fp::Residue> &b);

/// Uniformly random invertible matrix (rejection sampling).
FpMatrix random_invertible(std::size_t n, fp::Residue p, std::mt19937_64 &rng);

} // namespace galmod
