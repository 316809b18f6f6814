#include "galmod/jmodel.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "galmod/error.hpp"
#include "galmod/parallel.hpp"

namespace galmod {

namespace {

std::uint64_t ipow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 0;
  if (!fp::checked_pow(base, exp, out))
    throw DomainError("integer power overflows 64 bits");
  return out;
}

std::vector<std::uint32_t> shape_blocks(const RingParams &params, const ChiLevel &s,
                                        const std::vector<std::uint32_t> &d) {
  std::vector<std::uint32_t> blocks;
  blocks.push_back(s ? static_cast<std::uint32_t>(ipow(params.p(), *s)) + 1 : 1);
  for (std::uint32_t i = 0; i < d.size(); ++i)
    for (std::uint32_t c = 0; c < d[i]; ++c)
      blocks.push_back(static_cast<std::uint32_t>(ipow(params.p(), i)));
  return blocks;
}

const RingParams &checked_params(const RingParams &params, const ChiLevel &s,
                                 const std::vector<std::uint32_t> &d) {
  if (d.size() != params.n() + 1)
    throw ParamError("d must have n + 1 entries");
  if (s && *s >= params.n() + 1)
    throw ParamError("chi level must be below n");
  return params;
}

fp::Residue dot(const std::vector<fp::Residue> &e, std::span<const fp::Residue> x,
                fp::Residue p) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += static_cast<std::uint64_t>(e[i]) * x[i];
  return static_cast<fp::Residue>(acc % p);
}

bool is_prime_power_of(std::uint32_t value, std::uint32_t p, std::uint32_t max_exp) {
  std::uint64_t q = 1;
  for (std::uint32_t k = 0; k <= max_exp; ++k, q *= p)
    if (q == value)
      return true;
  return false;
}

// Per-element enumeration: visit(index, length, e) with e meaningful only
// for length < p^n. Runs chunked over worker threads.
template <class Visit>
void scan(const JModel &m, std::uint64_t count, Visit &&visit) {
  const ModuleShape &shape = m.shape();
  const fp::Residue p = shape.params().p();
  const std::size_t dim = shape.dimension();
  const auto &e = m.functional();
  std::vector<fp::Residue> prefix(dim);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    acc = (acc + e[i]) % p;
    prefix[i] = static_cast<fp::Residue>(acc);
  }
  std::vector<std::uint32_t> lens(shape.blocks().begin(), shape.blocks().end());
  std::vector<std::size_t> offs(shape.block_count());
  for (std::size_t b = 0; b < offs.size(); ++b)
    offs[b] = shape.offset(b);

  parallel_chunks(count, [&](std::uint64_t begin, std::uint64_t end, unsigned slot) {
    if (begin >= end)
      return;
    std::vector<fp::Residue> digits(dim);
    std::uint64_t rest = begin;
    std::uint64_t ev = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      digits[i] = static_cast<fp::Residue>(rest % p);
      rest /= p;
      ev += static_cast<std::uint64_t>(digits[i]) * e[i];
    }
    fp::Residue eval = static_cast<fp::Residue>(ev % p);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      std::uint32_t len = 0;
      for (std::size_t b = 0; b < lens.size(); ++b) {
        const fp::Residue *blk = digits.data() + offs[b];
        const std::uint32_t lb = lens[b];
        if (lb <= len)
          continue;
        for (std::uint32_t k = 0; k < lb - len; ++k)
          if (blk[k] != 0) {
            len = lb - k;
            break;
          }
      }
      visit(idx, len, eval, slot);
      std::size_t i = 0;
      while (i < dim && digits[i] == p - 1) {
        digits[i] = 0;
        ++i;
      }
      if (i < dim) {
        ++digits[i];
        eval = fp::add(eval, prefix[i], p);
      }
    }
  });
}

struct ElementTable {
  std::vector<std::uint32_t> len;
  std::vector<fp::Residue> e;
};

ElementTable element_table(const JModel &m, std::uint64_t guard) {
  const std::uint64_t count = m.cardinality(guard);
  ElementTable t;
  t.len.resize(count);
  t.e.resize(count);
  scan(m, count, [&](std::uint64_t idx, std::uint32_t len, fp::Residue e, unsigned) {
    t.len[idx] = len;
    t.e[idx] = e;
  });
  return t;
}

// Index of c chi + gamma given the index of gamma (chi is coordinate 0).
std::uint64_t translate_by_chi(std::uint64_t idx, fp::Residue c, fp::Residue p) {
  const std::uint64_t d0 = idx % p;
  return idx - d0 + (d0 + c) % p;
}

SetComparison compare_sets(const std::vector<char> &lhs, const std::vector<char> &rhs) {
  SetComparison out;
  for (std::uint64_t i = 0; i < lhs.size(); ++i) {
    out.lhs_size += lhs[i] ? 1 : 0;
    out.rhs_size += rhs[i] ? 1 : 0;
    if (lhs[i] != rhs[i] && !out.counterexample)
      out.counterexample = i;
  }
  out.equal = !out.counterexample.has_value();
  return out;
}

void require_shape(const JModel &m, const ModuleElement &x) {
  if (!(x.shape() == m.shape()))
    throw ParamError("element does not belong to the model's module");
}

} // namespace

std::string chi_level_to_string(const ChiLevel &s) {
  return s ? std::to_string(*s) : std::string("neg_inf");
}

JModel::JModel(const RingParams &params, ChiLevel chi_level, std::vector<std::uint32_t> d)
    : params_(checked_params(params, chi_level, d)), chi_level_(chi_level), d_(std::move(d)),
      shape_(params_, shape_blocks(params_, chi_level_, d_)), e_(shape_.dimension(), 0) {
  e_[0] = 1;
  for (std::uint32_t c = 0; c < d_[params_.n()]; ++c)
    e_[shape_.offset(y_block(params_.n(), c)) + 1] = 1;
}

std::size_t JModel::y_block(std::uint32_t i, std::uint32_t c) const {
  if (i >= d_.size() || c >= d_[i])
    throw ParamError("no such Y generator");
  std::size_t b = 1;
  for (std::uint32_t k = 0; k < i; ++k)
    b += d_[k];
  return b + c;
}

JModel JModel::with_tail(std::uint32_t generator, std::uint32_t k, fp::Residue value) const {
  if (k < 1 || k >= params_.order())
    throw ParamError("tail exponent must lie in [1, p^n)");
  JModel out = *this;
  out.e_[shape_.offset(y_block(params_.n(), generator)) + k] = value % params_.p();
  return out;
}

JModel JModel::with_functional_value(std::size_t coordinate, fp::Residue value) const {
  if (coordinate >= e_.size() || !coordinate_in_domain(coordinate))
    throw ParamError("coordinate outside the domain of e");
  JModel out = *this;
  out.e_[coordinate] = value % params_.p();
  return out;
}

bool JModel::coordinate_in_domain(std::size_t coordinate) const {
  for (std::size_t b = 0; b < shape_.block_count(); ++b)
    if (shape_.offset(b) == coordinate)
      return shape_.block_length(b) < params_.order();
  return coordinate < shape_.dimension();
}

bool JModel::in_domain(const ModuleElement &gamma) const {
  require_shape(*this, gamma);
  return length(gamma) < params_.order();
}

ModuleElement JModel::chi() const { return ModuleElement::generator(shape_, 0); }
ModuleElement JModel::zero() const { return ModuleElement(shape_); }

ValidationReport validate(const JModel &m) {
  const RingParams &params = m.params();
  const fp::Residue p = params.p();
  const ModuleShape &shape = m.shape();
  const auto &e = m.functional();
  auto fail = [](std::string what, std::string detail) {
    return ValidationReport{false, std::move(what), std::move(detail)};
  };

  if (m.chi_level() && *m.chi_level() > params.n() - 1)
    return fail("chi level range", "s must lie in {neg_inf, 0, ..., n-1}");
  for (std::size_t b = 0; b < shape.block_count(); ++b)
    if (shape.block_length(b) == params.order() && e[shape.offset(b)] != 0)
      return fail("domain", "e carries a value outside D");
  if (e[0] != 1)
    return fail("normalization", "e(chi) must be 1");
  for (std::uint32_t k = 1; k < m.chi_length(); ++k)
    if (e[k] != 0)
      return fail("e vanishes on (sigma-1)<chi>",
                  "e((sigma-1)^" + std::to_string(k) + " chi) = " + std::to_string(e[k]));
  for (std::uint32_t i = 0; i < params.n(); ++i)
    for (std::uint32_t c = 0; c < m.d()[i]; ++c) {
      const std::size_t b = m.y_block(i, c);
      for (std::uint32_t k = 0; k < shape.block_length(b); ++k)
        if (e[shape.offset(b) + k] != 0)
          return fail("Y_i ⊆ ker e for i<n", "e nonzero on (sigma-1)^" + std::to_string(k) +
                                                 " of generator " + std::to_string(c) +
                                                 " of Y_" + std::to_string(i));
    }
  const std::uint32_t lchi = m.chi_length();
  for (std::size_t b = 1; b < shape.block_count(); ++b)
    for (std::uint32_t k = 0; k < shape.block_length(b); ++k)
      if (shape.block_length(b) - k < lchi && e[shape.offset(b) + k] != 0)
        return fail("χ-minimality", "e nonzero on an element of length " +
                                        std::to_string(shape.block_length(b) - k) +
                                        " < l(chi) = " + std::to_string(lchi));
  (void)p;
  return {};
}

void require_valid(const JModel &m) {
  const auto report = validate(m);
  if (!report.ok)
    throw ModelInconsistency("invalid model: " + report.violation + " (" + report.detail + ")");
}

fp::Residue index(const JModel &m, const ModuleElement &gamma) {
  require_shape(m, gamma);
  if (length(gamma) >= m.params().order())
    throw DomainError("index undefined at length p^n");
  return dot(m.functional(), gamma.coords(), m.params().p());
}

Census census(const JModel &m, std::uint64_t guard) {
  const std::uint64_t count = m.cardinality(guard);
  const std::uint32_t top = m.params().order();
  const unsigned slots = thread_count();
  struct Hist {
    std::vector<std::uint64_t> zero, nonzero;
    std::uint64_t full = 0;
  };
  std::vector<Hist> hist(slots);
  for (auto &h : hist) {
    h.zero.assign(top, 0);
    h.nonzero.assign(top, 0);
  }
  scan(m, count, [&](std::uint64_t, std::uint32_t len, fp::Residue e, unsigned slot) {
    Hist &h = hist[slot];
    if (len >= top)
      ++h.full;
    else if (e == 0)
      ++h.zero[len];
    else
      ++h.nonzero[len];
  });
  Census c;
  c.max_length = top;
  c.zero.assign(top, 0);
  c.nonzero.assign(top, 0);
  for (const auto &h : hist) {
    for (std::uint32_t l = 0; l < top; ++l) {
      c.zero[l] += h.zero[l];
      c.nonzero[l] += h.nonzero[l];
    }
    c.full += h.full;
  }
  c.total = count;
  return c;
}

SolutionCount count_from_census(const Census &c, const RingParams &params, std::uint32_t ell,
                                ExtFlavor flavor) {
  const std::uint32_t top = params.order();
  if (ell < 1 || ell > top)
    throw ParamError("target length must lie in [1, p^n]");
  if (ell == top && flavor == ExtFlavor::Bullet)
    throw ParamError("there is only the split extension by A_{p^n}");
  SolutionCount out;
  out.ell = ell;
  out.flavor = flavor;
  if (ell == top)
    out.raw = c.full;
  else
    out.raw = flavor == ExtFlavor::Split ? c.zero[ell] : c.nonzero[ell];
  if (out.raw == 0)
    return out;
  const std::uint64_t gens = ipow(params.p(), ell) - ipow(params.p(), ell - 1);
  if (out.raw % gens != 0)
    throw ModelInconsistency("tally " + std::to_string(out.raw) +
                             " is not divisible by the generator count " + std::to_string(gens));
  out.count = out.raw / gens;
  return out;
}

SolutionCount count_solutions(const JModel &m, std::uint32_t ell, ExtFlavor flavor,
                              std::uint64_t guard) {
  if (ell < 1 || ell > m.params().order())
    throw ParamError("target length must lie in [1, p^n]");
  return count_from_census(census(m, guard), m.params(), ell, flavor);
}

std::vector<std::uint64_t> kernel_length_counts(const Census &c) {
  std::vector<std::uint64_t> out(c.zero.size());
  std::uint64_t acc = 0;
  for (std::size_t l = 0; l < c.zero.size(); ++l) {
    acc += c.zero[l];
    out[l] = acc;
  }
  return out;
}

Eq52Result verify_eq_5_2(const JModel &m, std::uint64_t guard) {
  if (m.params().n() != 1)
    throw ParamError("the length-2 decomposition is an n = 1 statement");
  const fp::Residue p = m.params().p();
  const auto table = element_table(m, guard);
  const std::uint64_t count = table.len.size();
  const bool chi_two = m.chi_length() == 2;
  std::vector<char> lhs(count, 0), rhs(count, 0);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t len = table.len[i];
    if (len >= p)
      continue;
    if (len == 2 && table.e[i] != 0)
      lhs[i] = 1;
    const bool base = table.e[i] == 0 && (len == 2 || (chi_two && len <= 1));
    if (base)
      for (fp::Residue c = 1; c < p; ++c)
        rhs[translate_by_chi(i, c, p)] = 1;
  }
  Eq52Result out;
  static_cast<SetComparison &>(out) = compare_sets(lhs, rhs);
  out.chi_length = m.chi_length();
  return out;
}

Cor36Witness cor_3_6_witness(const JModel &m) {
  require_valid(m);
  Cor36Witness w{m.chi_level(), m.chi(), m.chi_length(), index(m, m.chi())};
  return w;
}

Cor37Witness cor_3_7_witness(const JModel &m, const ModuleElement &gi, const ModuleElement &gj) {
  require_shape(m, gi);
  require_shape(m, gj);
  const std::uint32_t top = m.params().order();
  const std::uint32_t li = length(gi), lj = length(gj);
  if (li >= top || lj >= top)
    throw HypothesisError("both elements must lie in the domain of e");
  const fp::Residue p = m.params().p();
  const fp::Residue ei = index(m, gi), ej = index(m, gj);
  if (ei == 0 || ej == 0)
    throw HypothesisError("both elements need nontrivial index");
  if (!(li < lj))
    throw HypothesisError("l(gamma_i) must be smaller than l(gamma_j)");
  const fp::Residue c = fp::neg(fp::mul(ej, fp::inv(ei, p), p), p);
  Cor37Witness out{c, gi.scaled(c) + gj, 0, 0};
  out.length = length(out.witness);
  out.index = index(m, out.witness);
  return out;
}

std::string to_string(RealizeCase c) {
  switch (c) {
  case RealizeCase::Split2Split:
    return "4.1.1";
  case RealizeCase::Bullet2Split:
    return "4.1.2";
  case RealizeCase::Bullet2Bullet:
    return "4.1.3";
  case RealizeCase::Top:
    return "4.1.4";
  case RealizeCase::Prop42:
    return "4.2";
  }
  return "?";
}

RealizeCase parse_realize_case(const std::string &name) {
  for (auto c : {RealizeCase::Split2Split, RealizeCase::Bullet2Split, RealizeCase::Bullet2Bullet,
                 RealizeCase::Top, RealizeCase::Prop42})
    if (to_string(c) == name)
      return c;
  throw ParamError("unknown realization case '" + name + "'");
}

namespace {

struct Target {
  std::uint32_t length;
  IndexTarget index;
};

// Target (length, index class) for a case with satisfied hypotheses.
Target realize_target(const JModel &m, RealizeCase which, const RealizeInput &in) {
  const std::uint32_t top = m.params().order();
  const std::uint32_t l = length(in.gamma);
  switch (which) {
  case RealizeCase::Split2Split:
    return {l + 1, l + 1 == top ? IndexTarget::Any : IndexTarget::Zero};
  case RealizeCase::Bullet2Split:
    return {l, IndexTarget::Zero};
  case RealizeCase::Bullet2Bullet:
    return {l - 1, IndexTarget::Nonzero};
  case RealizeCase::Top:
    return {top / m.params().p() + in.k, IndexTarget::Nonzero};
  case RealizeCase::Prop42:
    return {static_cast<std::uint32_t>(ipow(m.params().p(), in.level)) + in.k,
            IndexTarget::Nonzero};
  }
  return {0, IndexTarget::Any};
}

// One step of the split-to-split construction: from gamma in ker e of length
// l (not a power of p) to an element of length l + 1, in ker e whenever
// l + 1 < p^n.
ModuleElement lift_once(const JModel &m, const ModuleElement &gamma, bool &adjusted,
                        std::vector<std::string> &steps) {
  const ModuleShape &shape = m.shape();
  const fp::Residue p = m.params().p();
  const std::uint32_t l = length(gamma);
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const auto blk = gamma.block(b);
    if (block_vector_length(blk) != l)
      continue;
    const LValue v = block_vector_valuation(blk);
    if (v.is_inf() || v.value() < 1)
      continue;
    ModuleElement w = ModuleElement::basis(shape, b, v.value() - 1);
    steps.push_back("(sigma-1)^" + std::to_string(v.value() - 1) + " * generator of block " +
                    std::to_string(b));
    if (length(w) < m.params().order()) {
      const fp::Residue ew = index(m, w);
      if (ew != 0) {
        w = w - m.chi().scaled(ew);
        adjusted = true;
        steps.push_back("subtract " + std::to_string(ew) + " chi to restore trivial index");
      }
    }
    (void)p;
    return w;
  }
  throw HypothesisError("no component of maximal length has positive valuation");
}

} // namespace

std::optional<std::string> realize_hypothesis_failure(const JModel &m, RealizeCase which,
                                                      const RealizeInput &in) {
  require_shape(m, in.gamma);
  const RingParams &params = m.params();
  const std::uint32_t p = params.p(), n = params.n(), top = params.order();
  const std::uint32_t l = length(in.gamma);
  if (l >= top)
    return "gamma must lie in the domain of e";
  if (l == 0)
    return "gamma must be nonzero";
  const fp::Residue e = index(m, in.gamma);
  switch (which) {
  case RealizeCase::Split2Split:
    if (e != 0)
      return "gamma must have trivial index";
    if (is_prime_power_of(l, p, n - 1))
      return "l(gamma) must not be a power p^k with k < n";
    return std::nullopt;
  case RealizeCase::Bullet2Split:
  case RealizeCase::Bullet2Bullet:
    if (e == 0)
      return "gamma must have nontrivial index";
    if (l >= 2 && is_prime_power_of(l - 1, p, n - 1))
      return "l(gamma) must not be p^k + 1 with k < n";
    if (l <= m.chi_length())
      return "l(gamma) must exceed l(chi)";
    return std::nullopt;
  case RealizeCase::Top: {
    const std::uint32_t base = top / p;
    if (e != 0)
      return "gamma must have trivial index";
    if (in.k < 1 || in.k >= top - base)
      return "k must satisfy 1 <= k < p^n - p^{n-1}";
    if (l < base + 1 || l > base + in.k)
      return "l(gamma) must lie in [p^{n-1}+1, p^{n-1}+k]";
    return std::nullopt;
  }
  case RealizeCase::Prop42: {
    if (in.level >= n)
      return "level i must lie in [0, n-1]";
    if (m.chi_level() && *m.chi_level() > in.level)
      return "chi level must not exceed i";
    const std::uint32_t base = static_cast<std::uint32_t>(ipow(p, in.level));
    if (in.k < 1 || in.k > base * p - base)
      return "k must satisfy 1 <= k <= p^{i+1} - p^i";
    if (base + in.k >= top)
      return "target p^i + k must stay below p^n";
    if (e != 0)
      return "gamma must have trivial index";
    if (l < base + 1 || l > base + in.k)
      return "l(gamma) must lie in [p^i+1, p^i+k]";
    return std::nullopt;
  }
  }
  return "unknown case";
}

RealizeResult auto_realize(const JModel &m, RealizeCase which, const RealizeInput &in,
                           const Census *oracle, std::uint64_t guard) {
  if (auto why = realize_hypothesis_failure(m, which, in))
    throw HypothesisError("case " + to_string(which) + ": " + *why);
  const RingParams &params = m.params();
  const fp::Residue p = params.p();
  const Target target = realize_target(m, which, in);

  RealizeResult r{.which = which, .witness = m.zero()};
  r.target_length = target.length;
  r.target_index = target.index;

  switch (which) {
  case RealizeCase::Split2Split:
    r.witness = lift_once(m, in.gamma, r.adjusted, r.steps);
    break;
  case RealizeCase::Bullet2Split: {
    const fp::Residue c = fp::neg(index(m, in.gamma), p);
    r.witness = m.chi().scaled(c) + in.gamma;
    r.steps.push_back(std::to_string(c) + " chi + gamma");
    break;
  }
  case RealizeCase::Bullet2Bullet: {
    if (m.chi_length() + 1 == length(in.gamma)) {
      r.witness = m.chi();
      r.steps.push_back("chi");
      break;
    }
    const fp::Residue c = fp::neg(index(m, in.gamma), p);
    const ModuleElement u = apply_t(m.chi().scaled(c) + in.gamma);
    const fp::Residue eu = index(m, u);
    fp::Residue cp = 1;
    while (fp::add(cp, eu, p) == 0)
      ++cp;
    if (cp != 1)
      r.adjusted = true;
    r.witness = m.chi().scaled(cp) + u;
    r.steps.push_back(std::to_string(cp) + " chi + (sigma-1)(" + std::to_string(c) +
                      " chi + gamma)");
    break;
  }
  case RealizeCase::Top:
  case RealizeCase::Prop42: {
    ModuleElement g = in.gamma;
    while (length(g) < target.length)
      g = lift_once(m, g, r.adjusted, r.steps);
    r.witness = m.chi() + g;
    r.steps.push_back("chi + lifted gamma");
    break;
  }
  }

  r.witness_length = length(r.witness);
  if (r.witness_length < params.order())
    r.witness_index = index(m, r.witness);
  r.length_ok = r.witness_length == target.length;
  switch (target.index) {
  case IndexTarget::Any:
    r.index_ok = true;
    break;
  case IndexTarget::Zero:
    r.index_ok = r.witness_index && *r.witness_index == 0;
    break;
  case IndexTarget::Nonzero:
    r.index_ok = r.witness_index && *r.witness_index != 0;
    break;
  }

  Census local;
  if (!oracle) {
    local = census(m, guard);
    oracle = &local;
  }
  if (target.length >= params.order())
    r.oracle_found = oracle->full > 0;
  else if (target.index == IndexTarget::Nonzero)
    r.oracle_found = oracle->nonzero[target.length] > 0;
  else
    r.oracle_found = oracle->zero[target.length] > 0;
  return r;
}

ModuleElement random_element(const JModel &m, std::mt19937_64 &rng) {
  std::uniform_int_distribution<std::int64_t> digit(0, m.params().p() - 1);
  std::vector<std::int64_t> coords(m.shape().dimension());
  for (auto &c : coords)
    c = digit(rng);
  return ModuleElement(m.shape(), std::move(coords));
}

std::optional<RealizeInput> sample_realize_input(const JModel &m, RealizeCase which,
                                                 std::mt19937_64 &rng, std::uint64_t guard) {
  const RingParams &params = m.params();
  const std::uint32_t p = params.p(), n = params.n(), top = params.order();
  RealizeInput in{m.zero()};
  if (which == RealizeCase::Top) {
    const std::uint32_t base = top / p;
    if (top - base < 2)
      return std::nullopt;
    in.k = std::uniform_int_distribution<std::uint32_t>(1, top - base - 1)(rng);
  } else if (which == RealizeCase::Prop42) {
    const std::uint32_t lo = m.chi_level() ? *m.chi_level() : 0;
    if (lo >= n)
      return std::nullopt;
    in.level = std::uniform_int_distribution<std::uint32_t>(lo, n - 1)(rng);
    const std::uint32_t base = static_cast<std::uint32_t>(ipow(p, in.level));
    const std::uint32_t kmax = std::min(base * p - base, top - base - 1);
    in.k = std::uniform_int_distribution<std::uint32_t>(1, kmax)(rng);
  }
  for (int attempt = 0; attempt < 2000; ++attempt) {
    in.gamma = random_element(m, rng);
    if (!realize_hypothesis_failure(m, which, in))
      return in;
  }
  const std::uint64_t count = m.cardinality(guard);
  std::vector<std::uint64_t> candidates;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    in.gamma = ModuleElement::from_index(m.shape(), idx);
    if (!realize_hypothesis_failure(m, which, in))
      candidates.push_back(idx);
  }
  if (candidates.empty())
    return std::nullopt;
  const auto pick =
      std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng);
  in.gamma = ModuleElement::from_index(m.shape(), candidates[pick]);
  return in;
}

JModel random_model(const RingParams &params, std::uint64_t max_size, std::mt19937_64 &rng) {
  const std::uint32_t p = params.p(), n = params.n();
  std::uint32_t max_dim = 0;
  for (std::uint64_t q = p; q <= max_size; q *= p)
    ++max_dim;
  if (max_dim < 1)
    throw ParamError("size bound admits no model");
  for (int attempt = 0; attempt < 64; ++attempt) {
    ChiLevel s;
    const std::uint32_t pick = std::uniform_int_distribution<std::uint32_t>(0, n)(rng);
    if (pick > 0)
      s = pick - 1;
    const std::uint32_t lchi = s ? static_cast<std::uint32_t>(ipow(p, *s)) + 1 : 1;
    if (lchi > max_dim)
      continue;
    std::uint32_t budget = max_dim - lchi;
    std::vector<std::uint32_t> d(n + 1, 0);
    std::vector<std::uint32_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0U);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::uint32_t i : order) {
      const std::uint32_t w = static_cast<std::uint32_t>(ipow(p, i));
      const std::uint32_t cap = std::min<std::uint32_t>(budget / w, 3);
      d[i] = std::uniform_int_distribution<std::uint32_t>(0, cap)(rng);
      budget -= d[i] * w;
    }
    return JModel(params, s, d);
  }
  return JModel(params, std::nullopt, std::vector<std::uint32_t>(n + 1, 0));
}

JModel randomize_tail(const JModel &m, std::mt19937_64 &rng) {
  const RingParams &params = m.params();
  const std::uint32_t top = params.order();
  std::uniform_int_distribution<fp::Residue> digit(0, params.p() - 1);
  JModel out = m;
  for (std::uint32_t g = 0; g < m.d()[params.n()]; ++g)
    for (std::uint32_t k = 1; k < top; ++k)
      out = out.with_tail(g, k, top - k < m.chi_length() ? 0 : digit(rng));
  return out;
}

std::optional<std::uint64_t> theorem_5_5_closed_form(std::uint32_t p, std::uint32_t d0,
                                                     std::uint32_t d1, std::uint32_t ell) {
  if (d1 == 0)
    return 0;
  if (ell < 2)
    throw ParamError("closed form needs l >= 2");
  std::uint64_t a = 0, b = 0, c = 0;
  if (!fp::checked_pow(p, d0 + d1 - 1, a) || !fp::checked_pow(p, d1, b) ||
      !fp::checked_pow(p, static_cast<std::uint64_t>(d1 - 1) * (ell - 2), c))
    return std::nullopt;
  const std::uint64_t mid = (b - 1) / (p - 1);
  boost::multiprecision::cpp_int v = boost::multiprecision::cpp_int(a) * mid * c;
  if (v > std::numeric_limits<std::uint64_t>::max())
    return std::nullopt;
  return v.convert_to<std::uint64_t>();
}

Thm55Result theorem_5_5_check(const JModel &m, const Census &c, std::uint32_t ell) {
  using boost::multiprecision::cpp_rational;
  const std::uint32_t p = m.params().p();
  if (m.params().n() != 1)
    throw ParamError("the A_l count formula is an n = 1 statement");
  if (ell < 2 || ell > p - 1)
    throw ParamError("l must lie in [2, p-1]");
  Thm55Result out;
  out.ell = ell;
  out.lhs = count_from_census(c, m.params(), ell, ExtFlavor::Split).count;
  out.nu_h = count_from_census(c, m.params(), 2, ExtFlavor::Split).count;
  out.nu_zz = count_from_census(c, m.params(), 1, ExtFlavor::Split).count;
  const cpp_rational nh(out.nu_h), nz(out.nu_zz);
  const cpp_rational base = cpp_rational(1, p) + cpp_rational(p - 1) * nh / (1 + (p - 1) * nz);
  cpp_rational rhs = nh;
  for (std::uint32_t k = 2; k < ell; ++k)
    rhs *= base;
  out.rhs_integral = boost::multiprecision::denominator(rhs) == 1;
  out.rhs = rhs.str();
  out.equal = out.rhs_integral && boost::multiprecision::numerator(rhs) == out.lhs;
  return out;
}

Thm55Result theorem_5_5_check(const JModel &m, std::uint32_t ell, std::uint64_t guard) {
  if (m.params().n() != 1)
    throw ParamError("the A_l count formula is an n = 1 statement");
  if (ell < 2 || ell > m.params().p() - 1)
    throw ParamError("l must lie in [2, p-1]");
  return theorem_5_5_check(m, census(m, guard), ell);
}

KernelStructure kernel_structure(const JModel &m) {
  if (m.params().n() != 1)
    throw ParamError("kernel structure comparison is an n = 1 statement");
  const ModuleShape &shape = m.shape();
  const fp::Residue p = m.params().p();
  const std::size_t dim = shape.dimension();
  const auto &e = m.functional();

  std::vector<std::size_t> domain;
  for (std::size_t i = 0; i < dim; ++i)
    if (m.coordinate_in_domain(i))
      domain.push_back(i);
  std::optional<std::size_t> pivot;
  for (auto i : domain)
    if (e[i] != 0) {
      pivot = i;
      break;
    }
  // columns spanning ker(e) cap D
  std::vector<std::vector<fp::Residue>> basis;
  for (auto i : domain) {
    if (pivot && i == *pivot)
      continue;
    std::vector<fp::Residue> v(dim, 0);
    v[i] = 1;
    if (pivot)
      v[*pivot] = fp::neg(fp::mul(e[i], fp::inv(e[*pivot], p), p), p);
    basis.push_back(std::move(v));
  }
  KernelStructure out;
  out.dimension = basis.size();
  out.displayed.assign(m.d()[0], 1);
  out.displayed.insert(out.displayed.end(), m.d()[1], p - 2);
  std::sort(out.displayed.begin(), out.displayed.end(), std::greater<>());

  out.is_submodule = true;
  for (const auto &v : basis) {
    const ModuleElement tv = apply_t(ModuleElement(shape, std::vector<std::int64_t>(v.begin(), v.end())));
    if (dot(e, tv.coords(), p) != 0) {
      out.is_submodule = false;
      break;
    }
  }
  if (out.is_submodule) {
    FpMatrix b(dim, basis.size(), p);
    for (std::size_t c = 0; c < basis.size(); ++c)
      for (std::size_t r = 0; r < dim; ++r)
        b(r, c) = basis[c][r];
    const FpMatrix u = action_matrix(shape);
    std::vector<std::size_t> ranks{basis.size()};
    FpMatrix cur = b;
    while (ranks.back() > 0) {
      cur = u * cur;
      ranks.push_back(cur.rank());
    }
    ranks.push_back(0);
    for (std::size_t l = 1; l + 1 < ranks.size(); ++l) {
      const std::size_t mult = ranks[l - 1] - 2 * ranks[l] + ranks[l + 1];
      out.blocks.insert(out.blocks.end(), mult, static_cast<std::uint32_t>(l));
    }
    std::sort(out.blocks.begin(), out.blocks.end(), std::greater<>());
  }
  out.matches = out.is_submodule && out.blocks == out.displayed;
  return out;
}

Thm54Result theorem_5_4_check(const JModel &m, std::uint32_t i, std::uint64_t guard) {
  const RingParams &params = m.params();
  const std::uint32_t p = params.p(), top = params.order();
  const std::uint32_t lo = top / p + 2, hi = top - 1;
  Thm54Result out;
  out.i = i;
  if (lo > hi) {
    out.range_empty = true;
    return out;
  }
  if (i < lo || i > hi)
    throw ParamError("i must lie in [p^{n-1}+2, p^n-1]");
  const auto table = element_table(m, guard);
  const std::uint64_t count = table.len.size();
  std::vector<char> lhs(count, 0), rhs(count, 0);
  std::uint64_t zero = 0, nonzero = 0;
  for (std::uint64_t x = 0; x < count; ++x) {
    if (table.len[x] != i)
      continue;
    if (table.e[x] != 0) {
      lhs[x] = 1;
      ++nonzero;
    } else {
      ++zero;
      for (fp::Residue c = 1; c < p; ++c)
        rhs[translate_by_chi(x, c, p)] = 1;
    }
  }
  Census c;
  c.max_length = top;
  c.zero.assign(top, 0);
  c.nonzero.assign(top, 0);
  c.zero[i] = zero;
  c.nonzero[i] = nonzero;
  out.split_count = count_from_census(c, params, i, ExtFlavor::Split).count;
  out.bullet_count = count_from_census(c, params, i, ExtFlavor::Bullet).count;
  out.ratio_ok = out.bullet_count == static_cast<std::uint64_t>(p - 1) * out.split_count;
  out.translation = compare_sets(lhs, rhs);
  return out;
}

std::uint64_t gaussian_binomial(std::uint32_t n, std::uint32_t m, std::uint32_t p) {
  if (m > n)
    throw ParamError("gaussian binomial needs m <= n");
  boost::multiprecision::cpp_int num = 1, den = 1;
  for (std::uint32_t i = 0; i < m; ++i) {
    num *= boost::multiprecision::pow(boost::multiprecision::cpp_int(p), n - i) - 1;
    den *= boost::multiprecision::pow(boost::multiprecision::cpp_int(p), m - i) - 1;
  }
  const boost::multiprecision::cpp_int q = num / den;
  if (q * den != num)
    throw ModelInconsistency("gaussian binomial quotient is not integral");
  if (q > std::numeric_limits<std::uint64_t>::max())
    throw DomainError("gaussian binomial overflows 64 bits");
  return q.convert_to<std::uint64_t>();
}

std::vector<std::vector<fp::Residue>> enumerate_lines(std::uint32_t dim, std::uint32_t p,
                                                      std::uint64_t guard) {
  if (!fp::is_prime(p))
    throw ParamError("p must be prime");
  std::uint64_t total = 0;
  if (!fp::checked_pow(p, dim, total) || total > guard)
    throw GuardError("F_p^dim exceeds the enumeration guard");
  std::vector<std::vector<fp::Residue>> out;
  // lexicographic order with coordinate 0 most significant
  for (std::uint32_t lead = 0; lead < dim; ++lead) {
    const std::uint32_t free = dim - lead - 1;
    const std::uint64_t tails = ipow(p, free);
    for (std::uint64_t t = 0; t < tails; ++t) {
      std::vector<fp::Residue> v(dim, 0);
      v[lead] = 1;
      std::uint64_t rest = t;
      for (std::uint32_t k = dim; k-- > lead + 1;) {
        v[k] = static_cast<fp::Residue>(rest % p);
        rest /= p;
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

namespace {

std::size_t span_rank(const std::vector<std::vector<fp::Residue>> &rows, std::uint32_t dim,
                      fp::Residue p) {
  if (rows.empty())
    return 0;
  FpMatrix mtx(rows.size(), dim, p);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::uint32_t c = 0; c < dim; ++c)
      mtx(r, c) = rows[r][c];
  return mtx.rank();
}

} // namespace

std::uint32_t fixed_kernel_dimension(const JModel &m) {
  const ModuleShape &shape = m.shape();
  bool hits = false;
  for (std::size_t b = 0; b < shape.block_count(); ++b)
    if (m.functional()[shape.offset(b) + shape.block_length(b) - 1] != 0)
      hits = true;
  return static_cast<std::uint32_t>(shape.block_count()) - (hits ? 1 : 0);
}

FieldModel::FieldModel(std::uint32_t p, std::uint32_t dim_jf,
                       std::vector<std::vector<fp::Residue>> frak_n_span, std::vector<Line> lines)
    : p_(p), dim_jf_(dim_jf), frak_n_span_(std::move(frak_n_span)), lines_(std::move(lines)) {
  if (!fp::is_prime(p) || p < 3)
    throw ParamError("p must be an odd prime");
  if (dim_jf < 1)
    throw ParamError("dim J(F) must be positive");
  for (const auto &v : frak_n_span_) {
    if (v.size() != dim_jf)
      throw ParamError("frak N spanning vector has the wrong length");
    for (auto x : v)
      if (x >= p)
        throw ParamError("frak N entries must be residues mod p");
  }
  dim_frak_n_ = static_cast<std::uint32_t>(span_rank(frak_n_span_, dim_jf, p));

  if (lines_.size() != gaussian_binomial(dim_jf, 1, p))
    throw ParamError("a field model needs one JModel per line of J(F)");
  std::set<std::vector<fp::Residue>> seen;
  for (const auto &line : lines_) {
    const auto &v = line.representative;
    if (v.size() != dim_jf)
      throw ParamError("line representative has the wrong length");
    auto lead = std::find_if(v.begin(), v.end(), [](fp::Residue x) { return x != 0; });
    if (lead == v.end() || *lead != 1)
      throw ParamError("line representatives must have leading entry 1");
    for (auto x : v)
      if (x >= p)
        throw ParamError("line representative entries must be residues mod p");
    if (!seen.insert(v).second)
      throw ParamError("duplicate line representative");
    if (line.model.params().p() != p || line.model.params().n() != 1)
      throw ParamError("line models must have the field's p and n = 1");
    const auto report = validate(line.model);
    if (!report.ok)
      throw ModelInconsistency("line model invalid: " + report.violation);
    if (in_frak_n(v) != !line.model.chi_level().has_value())
      throw ModelInconsistency("chi level must be neg_inf exactly on lines inside frak N");
    if (fixed_kernel_dimension(line.model) + 1 != dim_jf)
      throw ModelInconsistency("dim(J^G cap ker e) must equal dim J(F) - 1 on every line");
  }
}

FieldModel FieldModel::uniform(std::uint32_t p, std::uint32_t dim_jf,
                               std::vector<std::vector<fp::Residue>> frak_n_span,
                               const JModel &inside, const JModel &outside) {
  const std::size_t rank = span_rank(frak_n_span, dim_jf, p);
  std::vector<Line> lines;
  for (auto &v : enumerate_lines(dim_jf, p)) {
    auto rows = frak_n_span;
    rows.push_back(v);
    const bool in = span_rank(rows, dim_jf, p) == rank;
    lines.push_back({std::move(v), in ? inside : outside});
  }
  return FieldModel(p, dim_jf, std::move(frak_n_span), std::move(lines));
}

bool FieldModel::in_frak_n(const std::vector<fp::Residue> &v) const {
  auto rows = frak_n_span_;
  rows.push_back(v);
  return span_rank(rows, dim_jf_, p_) == dim_frak_n_;
}

namespace {

std::vector<Census> line_censuses(const FieldModel &fm, std::uint64_t guard) {
  std::vector<Census> out;
  std::vector<const JModel *> done;
  for (const auto &line : fm.lines()) {
    auto hit = std::find_if(done.begin(), done.end(),
                            [&](const JModel *m) { return *m == line.model; });
    if (hit != done.end())
      out.push_back(out[static_cast<std::size_t>(hit - done.begin())]);
    else
      out.push_back(census(line.model, guard));
    done.push_back(&line.model);
  }
  return out;
}

Thm51Result thm51_from(const FieldModel &fm, const std::vector<Census> &cs) {
  const std::uint32_t p = fm.p();
  const RingParams params(p, 1);
  Thm51Result r;
  for (const auto &c : cs) {
    const auto s = count_from_census(c, params, 2, ExtFlavor::Split).count;
    const auto b = count_from_census(c, params, 2, ExtFlavor::Bullet).count;
    r.per_line_split2.push_back(s);
    r.per_line_bullet2.push_back(b);
    r.sum_split2 += s;
    r.nu_m += b;
  }
  r.divisible = r.sum_split2 % (p + 1) == 0;
  r.nu_h = r.sum_split2 / (p + 1);
  const std::uint64_t lines_in_n = fm.dim_frak_n() == 0 ? 0 : gaussian_binomial(fm.dim_frak_n(), 1, p);
  const std::uint64_t diff = gaussian_binomial(fm.dim_jf(), 1, p) - lines_in_n;
  if (diff != 0) {
    if (fm.dim_jf() < 2)
      throw ParamError("correction term |J(F)|/p^2 is not integral for dim J(F) < 2");
    r.correction = diff * ipow(p, fm.dim_jf() - 2);
  }
  r.predicted_nu_m = (static_cast<std::uint64_t>(p) * p - 1) * r.nu_h + r.correction;
  r.equal = r.divisible && r.nu_m == r.predicted_nu_m;
  return r;
}

} // namespace

Thm51Result theorem_5_1_check(const FieldModel &fm, std::uint64_t guard) {
  return thm51_from(fm, line_censuses(fm, guard));
}

std::vector<Cor57Item> corollary_5_7_report(const FieldModel &fm, std::uint64_t guard) {
  const std::uint32_t p = fm.p();
  const RingParams params(p, 1);
  const auto cs = line_censuses(fm, guard);
  std::vector<Cor57Item> out;

  const Thm51Result t = thm51_from(fm, cs);
  Cor57Item one{.item = "1", .i = 2, .flavor = ExtFlavor::Split, .per_line = t.per_line_split2, .global = t.nu_h, .stated = 1};
  one.matches = t.divisible && t.nu_h == 1;
  out.push_back(one);

  auto global = [&](const std::string &item, std::uint32_t i, ExtFlavor f,
                    std::uint64_t stated, bool flag_on_mismatch) {
    Cor57Item it{.item = item, .i = i, .flavor = f};
    for (const auto &c : cs) {
      const auto v = count_from_census(c, params, i, f).count;
      it.per_line.push_back(v);
      it.global += v;
    }
    it.stated = stated;
    it.matches = it.global == stated;
    it.flagged = flag_on_mismatch && !it.matches;
    out.push_back(it);
  };
  const std::uint64_t p2m1 = static_cast<std::uint64_t>(p) * p - 1;
  global("2", p, ExtFlavor::Split, p2m1, true);
  for (std::uint32_t i = 3; i + 1 < p; ++i)
    global("3", i, ExtFlavor::Split, p + 1, false);
  for (std::uint32_t i = 3; i + 1 < p; ++i)
    global("4", i, ExtFlavor::Bullet, p2m1, false);
  return out;
}

} // namespace galmod
