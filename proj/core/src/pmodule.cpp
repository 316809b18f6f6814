#include "galmod/pmodule.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <utility>

#include "galmod/error.hpp"

namespace galmod {

ModuleShape::ModuleShape(const RingParams &params, std::vector<std::uint32_t> blocks)
    : params_(params), blocks_(std::move(blocks)) {
  if (blocks_.empty())
    throw ParamError("ModuleShape: at least one block is required");
  offsets_.reserve(blocks_.size());
  for (auto len : blocks_) {
    if (len < 1 || len > params_.order())
      throw ParamError("ModuleShape: block length " + std::to_string(len) +
                       " outside [1, p^n]");
    offsets_.push_back(dimension_);
    dimension_ += len;
  }
}

std::uint64_t ModuleShape::cardinality(std::uint64_t guard) const {
  std::uint64_t size = 0;
  if (!fp::checked_pow(params_.p(), dimension_, size) || size > guard)
    throw GuardError("module of dimension " + std::to_string(dimension_) +
                     " exceeds the enumeration guard " + std::to_string(guard));
  return size;
}

ModuleElement::ModuleElement(const ModuleShape &shape)
    : shape_(shape), coords_(shape.dimension(), 0) {}

ModuleElement::ModuleElement(const ModuleShape &shape, std::vector<std::int64_t> coords)
    : shape_(shape), coords_(shape.dimension(), 0) {
  if (coords.size() != shape.dimension())
    throw ParamError("ModuleElement: coordinate count does not match the shape");
  for (std::size_t i = 0; i < coords.size(); ++i)
    coords_[i] = fp::reduce(coords[i], shape.params().p());
}

ModuleElement ModuleElement::generator(const ModuleShape &shape, std::size_t b) {
  return basis(shape, b, 0);
}

ModuleElement ModuleElement::basis(const ModuleShape &shape, std::size_t b, std::uint32_t k) {
  if (b >= shape.block_count())
    throw ParamError("ModuleElement::basis: block index out of range");
  ModuleElement out(shape);
  if (k < shape.block_length(b))
    out.coords_[shape.offset(b) + k] = 1;
  return out;
}

ModuleElement ModuleElement::from_index(const ModuleShape &shape, std::uint64_t index) {
  ModuleElement out(shape);
  const auto p = shape.params().p();
  for (auto &c : out.coords_) {
    c = static_cast<fp::Residue>(index % p);
    index /= p;
  }
  return out;
}

std::span<const fp::Residue> ModuleElement::block(std::size_t b) const {
  return std::span<const fp::Residue>(coords_).subspan(shape_.offset(b),
                                                       shape_.block_length(b));
}

std::uint64_t ModuleElement::index() const {
  std::uint64_t idx = 0;
  const auto p = shape_.params().p();
  for (std::size_t i = coords_.size(); i-- > 0;)
    idx = idx * p + coords_[i];
  return idx;
}

namespace {

void require_same(const ModuleShape &a, const ModuleShape &b) {
  if (!(a == b))
    throw ParamError("ModuleElement: operands live in different modules");
}

} // namespace

ModuleElement ModuleElement::operator+(const ModuleElement &rhs) const {
  require_same(shape_, rhs.shape_);
  ModuleElement out(shape_);
  const auto p = shape_.params().p();
  for (std::size_t i = 0; i < coords_.size(); ++i)
    out.coords_[i] = fp::add(coords_[i], rhs.coords_[i], p);
  return out;
}

ModuleElement ModuleElement::operator-(const ModuleElement &rhs) const {
  return *this + (-rhs);
}

ModuleElement ModuleElement::operator-() const {
  ModuleElement out(shape_);
  for (std::size_t i = 0; i < coords_.size(); ++i)
    out.coords_[i] = fp::neg(coords_[i], shape_.params().p());
  return out;
}

ModuleElement ModuleElement::scaled(fp::Residue c) const {
  ModuleElement out(shape_);
  const auto p = shape_.params().p();
  for (std::size_t i = 0; i < coords_.size(); ++i)
    out.coords_[i] = fp::mul(coords_[i], c % p, p);
  return out;
}

bool ModuleElement::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c == 0; });
}

ModuleElement act(const GroupRingElement &f, const ModuleElement &m) {
  const auto &shape = m.shape();
  if (!(f.params() == shape.params()))
    throw ParamError("act: ring and module parameters differ");
  const auto p = shape.params().p();
  std::vector<std::int64_t> out(shape.dimension(), 0);
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t off = shape.offset(b);
    const std::size_t len = shape.block_length(b);
    for (std::size_t i = 0; i < len; ++i) {
      const fp::Residue a = f.coeff(i);
      if (a == 0)
        continue;
      for (std::size_t j = 0; i + j < len; ++j) {
        const fp::Residue v = m.coord(off + j);
        if (v != 0)
          out[off + i + j] = (out[off + i + j] + std::int64_t{fp::mul(a, v, p)}) % p;
      }
    }
  }
  return ModuleElement(shape, std::move(out));
}

ModuleElement apply_t(const ModuleElement &m) {
  return act(GroupRingElement::t(m.shape().params()), m);
}

std::uint32_t block_vector_length(std::span<const fp::Residue> v) {
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] != 0)
      return static_cast<std::uint32_t>(v.size() - k);
  return 0;
}

LValue block_vector_valuation(std::span<const fp::Residue> v) {
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] != 0)
      return LValue(static_cast<std::uint32_t>(k));
  return LValue::inf();
}

std::uint32_t length_of(const ModuleShape &shape, std::span<const fp::Residue> coords) {
  std::uint32_t best = 0;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const auto len = block_vector_length(coords.subspan(shape.offset(b), shape.block_length(b)));
    best = std::max(best, len);
  }
  return best;
}

std::uint32_t length(const ModuleElement &m) { return length_of(m.shape(), m.coords()); }

std::uint32_t cyclic_dimension(const ModuleElement &m) {
  // Rank of {m, t m, t^2 m, ...}; independent of the length shortcut.
  const auto &shape = m.shape();
  std::vector<std::vector<fp::Residue>> rows;
  ModuleElement cur = m;
  while (!cur.is_zero()) {
    rows.emplace_back(cur.coords().begin(), cur.coords().end());
    cur = apply_t(cur);
  }
  if (rows.empty())
    return 0;
  return static_cast<std::uint32_t>(FpMatrix::from_rows(rows, shape.params().p()).rank());
}

std::vector<ModuleElement> cyclic_elements(const ModuleElement &m, std::uint64_t guard) {
  const auto &shape = m.shape();
  const auto p = shape.params().p();
  const std::uint32_t len = length(m);
  std::uint64_t count = 0;
  if (!fp::checked_pow(p, len, count) || count > guard)
    throw GuardError("cyclic_elements: p^length exceeds the guard");
  std::vector<ModuleElement> span_basis;
  ModuleElement cur = m;
  for (std::uint32_t k = 0; k < len; ++k) {
    span_basis.push_back(cur);
    cur = apply_t(cur);
  }
  std::vector<ModuleElement> out;
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    ModuleElement e(shape);
    std::uint64_t rest = idx;
    for (std::uint32_t k = 0; k < len; ++k) {
      const auto c = static_cast<fp::Residue>(rest % p);
      rest /= p;
      if (c != 0)
        e = e + span_basis[k].scaled(c);
    }
    out.push_back(std::move(e));
  }
  return out;
}

NilpotentAction::NilpotentAction(const RingParams &params, FpMatrix u)
    : params_(params), u_(std::move(u)) {
  if (u_.rows() != u_.cols())
    throw ParamError("NilpotentAction: matrix must be square");
  if (u_.prime() != params.p())
    throw ParamError("NilpotentAction: matrix field differs from p");
  if (!u_.pow(params.order()).is_zero())
    throw ParamError("NilpotentAction: u^{p^n} is not zero");
}

FpMatrix action_matrix(const ModuleShape &shape) {
  const std::size_t d = shape.dimension();
  FpMatrix u(d, d, shape.params().p());
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t off = shape.offset(b);
    for (std::size_t k = 0; k + 1 < shape.block_length(b); ++k)
      u(off + k + 1, off + k) = 1;
  }
  return u;
}

std::vector<std::uint32_t> decompose(const NilpotentAction &action) {
  const std::size_t d = action.dimension();
  // ranks r_0 = d, r_1, ... until zero, plus one trailing zero
  std::vector<std::size_t> ranks{d};
  FpMatrix power = FpMatrix::identity(d, action.params().p());
  while (ranks.back() != 0) {
    power = power * action.matrix();
    ranks.push_back(power.rank());
  }
  ranks.push_back(0);
  std::vector<std::uint32_t> blocks;
  for (std::size_t l = 1; l + 1 < ranks.size(); ++l) {
    const std::int64_t mult = static_cast<std::int64_t>(ranks[l - 1]) -
                              2 * static_cast<std::int64_t>(ranks[l]) +
                              static_cast<std::int64_t>(ranks[l + 1]);
    for (std::int64_t i = 0; i < mult; ++i)
      blocks.push_back(static_cast<std::uint32_t>(l));
  }
  std::sort(blocks.begin(), blocks.end(), std::greater<>());
  return blocks;
}

} // namespace galmod
