#include "galmod/fp_matrix.hpp"

#include <utility>

#include "galmod/error.hpp"

namespace galmod {

FpMatrix::FpMatrix(std::size_t rows, std::size_t cols, fp::Residue p)
    : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {}

FpMatrix FpMatrix::identity(std::size_t n, fp::Residue p) {
  FpMatrix m(n, n, p);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1 % p;
  return m;
}

FpMatrix FpMatrix::from_rows(const std::vector<std::vector<fp::Residue>> &rows,
                             fp::Residue p) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  FpMatrix m(r, c, p);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c)
      throw ParamError("FpMatrix::from_rows: ragged rows");
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = rows[i][j] % p;
  }
  return m;
}

FpMatrix FpMatrix::operator*(const FpMatrix &rhs) const {
  if (cols_ != rhs.rows_ || p_ != rhs.p_)
    throw ParamError("FpMatrix: shape or field mismatch in product");
  FpMatrix out(rows_, rhs.cols_, p_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const fp::Residue a = (*this)(i, k);
      if (a == 0)
        continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j)
        out(i, j) = fp::add(out(i, j), fp::mul(a, rhs(k, j), p_), p_);
    }
  return out;
}

FpMatrix FpMatrix::operator+(const FpMatrix &rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || p_ != rhs.p_)
    throw ParamError("FpMatrix: shape or field mismatch in sum");
  FpMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i)
    out.data_[i] = fp::add(data_[i], rhs.data_[i], p_);
  return out;
}

FpMatrix FpMatrix::pow(std::size_t e) const {
  if (rows_ != cols_)
    throw ParamError("FpMatrix::pow: matrix not square");
  FpMatrix result = identity(rows_, p_);
  FpMatrix base = *this;
  while (e > 0) {
    if (e & 1U)
      result = result * base;
    e >>= 1U;
    if (e > 0)
      base = base * base;
  }
  return result;
}

bool FpMatrix::is_zero() const {
  for (auto v : data_)
    if (v != 0)
      return false;
  return true;
}

std::vector<std::size_t> FpMatrix::rref_in_place() {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
    std::size_t piv = row;
    while (piv < rows_ && (*this)(piv, col) == 0)
      ++piv;
    if (piv == rows_)
      continue;
    if (piv != row)
      for (std::size_t j = 0; j < cols_; ++j)
        std::swap((*this)(piv, j), (*this)(row, j));
    const fp::Residue scale = fp::inv((*this)(row, col), p_);
    for (std::size_t j = col; j < cols_; ++j)
      (*this)(row, j) = fp::mul((*this)(row, j), scale, p_);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row)
        continue;
      const fp::Residue f = (*this)(r, col);
      if (f == 0)
        continue;
      const fp::Residue nf = fp::neg(f, p_);
      for (std::size_t j = col; j < cols_; ++j) {
        const fp::Residue a = (*this)(row, j);
        if (a != 0)
          (*this)(r, j) = fp::add((*this)(r, j), fp::mul(nf, a, p_), p_);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t FpMatrix::rank() const {
  FpMatrix copy = *this;
  return copy.rref_in_place().size();
}

std::optional<FpMatrix> FpMatrix::inverse() const {
  if (rows_ != cols_)
    throw ParamError("FpMatrix::inverse: matrix not square");
  const std::size_t n = rows_;
  FpMatrix aug(n, 2 * n, p_);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1 % p_;
  }
  const auto pivots = aug.rref_in_place();
  if (pivots.size() < n || pivots[n - 1] != n - 1)
    return std::nullopt;
  FpMatrix out(n, n, p_);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out(i, j) = aug(i, n + j);
  return out;
}

LinearSolve solve_linear(const FpMatrix &a, const std::vector<fp::Residue> &b) {
  if (b.size() != a.rows())
    throw ParamError("solve_linear: right-hand side length mismatch");
  const std::size_t n = a.cols();
  FpMatrix aug(a.rows(), n + 1, a.prime());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j)
      aug(i, j) = a(i, j);
    aug(i, n) = b[i] % a.prime();
  }
  const auto pivots = aug.rref_in_place();
  LinearSolve out;
  out.rank_augmented = pivots.size();
  out.rank_a = pivots.size();
  if (!pivots.empty() && pivots.back() == n) {
    out.rank_a = pivots.size() - 1;
    return out;
  }
  std::vector<fp::Residue> x(n, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r)
    x[pivots[r]] = aug(r, n);
  out.solution = std::move(x);
  return out;
}

FpMatrix random_invertible(std::size_t n, fp::Residue p, std::mt19937_64 &rng) {
  std::uniform_int_distribution<fp::Residue> dist(0, p - 1);
  for (;;) {
    FpMatrix m(n, n, p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m(i, j) = dist(rng);
    if (m.rank() == n)
      return m;
  }
}

} // namespace galmod
