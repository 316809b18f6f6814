#include "galmod/cohomology.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "galmod/error.hpp"
#include "galmod/fp_matrix.hpp"
#include "galmod/group_invariants.hpp"

namespace galmod {

FiniteGroupTable::FiniteGroupTable(std::size_t order, std::vector<std::uint32_t> table,
                                   std::uint32_t identity, std::string name,
                                   std::size_t assoc_guard)
    : order_(order), table_(std::move(table)), identity_(identity), name_(std::move(name)) {
  if (order_ == 0 || table_.size() != order_ * order_)
    throw ParamError("multiplication table must be N x N");
  if (identity_ >= order_)
    throw ParamError("identity index out of range");
  for (auto v : table_)
    if (v >= order_)
      throw ParamError("multiplication table entry out of range");
  for (std::size_t a = 0; a < order_; ++a)
    if (multiply(identity_, a) != a || multiply(a, identity_) != a)
      throw ParamError("identity element does not act trivially");
  std::vector<char> seen(order_);
  for (std::size_t a = 0; a < order_; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < order_; ++b)
      seen[multiply(a, b)] = 1;
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
      throw ParamError("table row is not a permutation");
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < order_; ++b)
      seen[multiply(b, a)] = 1;
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
      throw ParamError("table column is not a permutation");
  }
  auto assoc = [&](std::size_t a, std::size_t b, std::size_t c) {
    return multiply(multiply(a, b), c) == multiply(a, multiply(b, c));
  };
  if (order_ <= assoc_guard) {
    for (std::size_t a = 0; a < order_; ++a)
      for (std::size_t b = 0; b < order_; ++b)
        for (std::size_t c = 0; c < order_; ++c)
          if (!assoc(a, b, c))
            throw ParamError("multiplication table is not associative");
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<std::size_t> pick(0, order_ - 1);
    for (int t = 0; t < 100000; ++t)
      if (!assoc(pick(rng), pick(rng), pick(rng)))
        throw ParamError("multiplication table is not associative");
  }
  inverse_.resize(order_);
  for (std::size_t a = 0; a < order_; ++a)
    for (std::size_t b = 0; b < order_; ++b)
      if (multiply(a, b) == identity_) {
        inverse_[a] = static_cast<std::uint32_t>(b);
        break;
      }
  std::vector<bool> in(order_, false);
  in[identity_] = true;
  for (std::size_t a = 0; a < order_; ++a) {
    if (in[a])
      continue;
    generators_.push_back(a);
    in = subgroup_closure(*this, generators_);
  }
}

FiniteGroupTable FiniteGroupTable::cyclic(std::uint32_t m) {
  if (m == 0)
    throw ParamError("cyclic group order must be positive");
  std::vector<std::uint32_t> t(static_cast<std::size_t>(m) * m);
  for (std::uint32_t a = 0; a < m; ++a)
    for (std::uint32_t b = 0; b < m; ++b)
      t[static_cast<std::size_t>(a) * m + b] = (a + b) % m;
  return FiniteGroupTable(m, std::move(t), 0, "Z/" + std::to_string(m));
}

FiniteGroupTable FiniteGroupTable::elementary_abelian(std::uint32_t p, std::uint32_t rank) {
  std::uint64_t n = 0;
  if (!fp::is_prime(p) || !fp::checked_pow(p, rank, n) || n > 100'000)
    throw ParamError("(Z/p)^rank needs prime p and a small order");
  std::vector<std::uint32_t> t(n * n);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b) {
      std::uint64_t x = a, y = b, out = 0, place = 1;
      for (std::uint32_t i = 0; i < rank; ++i) {
        out += ((x % p + y % p) % p) * place;
        x /= p;
        y /= p;
        place *= p;
      }
      t[a * n + b] = static_cast<std::uint32_t>(out);
    }
  return FiniteGroupTable(n, std::move(t), 0,
                          "(Z/" + std::to_string(p) + ")^" + std::to_string(rank));
}

FiniteGroupTable FiniteGroupTable::from_ext_group(const ExtGroup &g, std::uint64_t guard) {
  const std::uint64_t n = g.size();
  if (n > guard)
    throw GuardError("group too large for a dense table");
  std::vector<std::uint32_t> t(n * n);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b)
      t[a * n + b] = static_cast<std::uint32_t>(g.multiply(a, b));
  const std::string name = "A_" + std::to_string(g.ell()) +
                           (g.flavor() == ExtFlavor::Split ? " x| " : " . ") + "G_" +
                           std::to_string(g.params().n());
  return FiniteGroupTable(n, std::move(t), static_cast<std::uint32_t>(g.identity_index()), name);
}

Cochain::Cochain(GroupPtr group, std::uint32_t degree, fp::Residue p)
    : group_(std::move(group)), degree_(degree), p_(p) {
  if (!group_)
    throw ParamError("cochain needs a group");
  if (degree_ < 1 || degree_ > 3)
    throw ParamError("cochain degree must be 1, 2 or 3");
  if (!fp::is_prime(p_))
    throw ParamError("coefficients need a prime p");
  std::size_t size = 1;
  for (std::uint32_t k = 0; k < degree_; ++k)
    size *= group_->size();
  values_.assign(size, 0);
}

fp::Residue Cochain::at(std::uint64_t g1) const { return values_[g1]; }
fp::Residue Cochain::at(std::uint64_t g1, std::uint64_t g2) const {
  return values_[g1 + g2 * group_->size()];
}
fp::Residue Cochain::at(std::uint64_t g1, std::uint64_t g2, std::uint64_t g3) const {
  const std::uint64_t n = group_->size();
  return values_[g1 + n * (g2 + n * g3)];
}
void Cochain::set(std::uint64_t g1, std::int64_t value) { values_[g1] = fp::reduce(value, p_); }
void Cochain::set(std::uint64_t g1, std::uint64_t g2, std::int64_t value) {
  values_[g1 + g2 * group_->size()] = fp::reduce(value, p_);
}
void Cochain::set_flat(std::size_t index, std::int64_t value) {
  values_.at(index) = fp::reduce(value, p_);
}

void Cochain::require_compatible(const Cochain &rhs) const {
  if (group_ != rhs.group_ || degree_ != rhs.degree_ || p_ != rhs.p_)
    throw ParamError("cochains live on different groups, degrees or primes");
}

Cochain Cochain::operator+(const Cochain &rhs) const {
  require_compatible(rhs);
  Cochain out = *this;
  for (std::size_t i = 0; i < values_.size(); ++i)
    out.values_[i] = fp::add(values_[i], rhs.values_[i], p_);
  return out;
}

Cochain Cochain::operator-(const Cochain &rhs) const {
  require_compatible(rhs);
  Cochain out = *this;
  for (std::size_t i = 0; i < values_.size(); ++i)
    out.values_[i] = fp::sub(values_[i], rhs.values_[i], p_);
  return out;
}

Cochain Cochain::scaled(fp::Residue c) const {
  Cochain out = *this;
  for (auto &v : out.values_)
    v = fp::mul(v, c % p_, p_);
  return out;
}

bool Cochain::operator==(const Cochain &rhs) const {
  return group_ == rhs.group_ && degree_ == rhs.degree_ && p_ == rhs.p_ &&
         values_ == rhs.values_;
}

bool Cochain::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](fp::Residue v) { return v == 0; });
}

Cochain d1(const Cochain &h) {
  if (h.degree() != 1)
    throw ParamError("d1 takes a 1-cochain");
  const auto &g = *h.group();
  const fp::Residue p = h.prime();
  Cochain out(h.group(), 2, p);
  for (std::uint64_t a = 0; a < g.size(); ++a)
    for (std::uint64_t b = 0; b < g.size(); ++b)
      out.set(a, b,
              static_cast<std::int64_t>(h.at(a)) + h.at(b) -
                  static_cast<std::int64_t>(h.at(g.multiply(a, b))));
  return out;
}

Cochain d2(const Cochain &c) {
  if (c.degree() != 2)
    throw ParamError("d2 takes a 2-cochain");
  const auto &g = *c.group();
  const std::uint64_t n = g.size();
  const fp::Residue p = c.prime();
  Cochain out(c.group(), 3, p);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b) {
      const std::uint64_t ab = g.multiply(a, b);
      for (std::uint64_t x = 0; x < n; ++x) {
        const std::int64_t v = static_cast<std::int64_t>(c.at(b, x)) - c.at(ab, x) +
                               c.at(a, g.multiply(b, x)) - c.at(a, b);
        out.set_flat(a + n * (b + n * x), v);
      }
    }
  return out;
}

bool is_1cocycle(const Cochain &h) { return d1(h).is_zero(); }

bool is_2cocycle(const Cochain &c) {
  if (c.degree() != 2)
    throw ParamError("is_2cocycle takes a 2-cochain");
  const auto &g = *c.group();
  const std::uint64_t n = g.size();
  const fp::Residue p = c.prime();
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b) {
      const std::uint64_t ab = g.multiply(a, b);
      for (std::uint64_t x = 0; x < n; ++x) {
        const fp::Residue lhs = fp::add(c.at(b, x), c.at(a, g.multiply(b, x)), p);
        const fp::Residue rhs = fp::add(c.at(ab, x), c.at(a, b), p);
        if (lhs != rhs)
          return false;
      }
    }
  return true;
}

Cochain cup11(const Cochain &phi, const Cochain &psi) {
  if (phi.degree() != 1 || psi.degree() != 1 || phi.group() != psi.group() ||
      phi.prime() != psi.prime())
    throw ParamError("cup11 takes two 1-cochains on one group");
  if (!is_1cocycle(phi) || !is_1cocycle(psi))
    throw ParamError("cup11 arguments must be 1-cocycles");
  const std::uint64_t n = phi.group()->size();
  const fp::Residue p = phi.prime();
  Cochain out(phi.group(), 2, p);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b)
      out.set(a, b, fp::mul(phi.at(a), psi.at(b), p));
  return out;
}

GroupSurjection::GroupSurjection(GroupPtr domain, GroupPtr codomain,
                                 std::vector<std::uint64_t> map)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), map_(std::move(map)) {
  if (!domain_ || !codomain_ || map_.size() != domain_->size())
    throw ParamError("surjection map must cover the domain");
  std::vector<char> hit(codomain_->size(), 0);
  for (auto v : map_) {
    if (v >= codomain_->size())
      throw ParamError("surjection value out of range");
    hit[v] = 1;
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end())
    throw ParamError("map is not surjective");
  for (std::uint64_t a = 0; a < domain_->size(); ++a)
    for (std::uint64_t b = 0; b < domain_->size(); ++b)
      if (map_[domain_->multiply(a, b)] != codomain_->multiply(map_[a], map_[b]))
        throw ParamError("map is not a homomorphism");
}

Cochain inflate(const Cochain &c, const GroupSurjection &pi) {
  if (c.group() != pi.codomain())
    throw ParamError("cochain does not live on the surjection's codomain");
  const std::uint64_t n = pi.domain()->size();
  Cochain out(pi.domain(), c.degree(), c.prime());
  if (c.degree() == 1) {
    for (std::uint64_t a = 0; a < n; ++a)
      out.set(a, c.at(pi(a)));
  } else if (c.degree() == 2) {
    for (std::uint64_t a = 0; a < n; ++a)
      for (std::uint64_t b = 0; b < n; ++b)
        out.set(a, b, c.at(pi(a), pi(b)));
  } else {
    throw ParamError("inflation is implemented in degrees 1 and 2");
  }
  return out;
}

CoboundarySolve solve_coboundary(const Cochain &c) {
  if (c.degree() != 2 || !is_2cocycle(c))
    throw ParamError("solve_coboundary needs a 2-cocycle");
  const auto &g = *c.group();
  const std::uint64_t n = g.size();
  const fp::Residue p = c.prime();
  FpMatrix a(n * n, n, p);
  std::vector<fp::Residue> rhs(n * n);
  for (std::uint64_t x = 0; x < n; ++x)
    for (std::uint64_t y = 0; y < n; ++y) {
      const std::uint64_t row = x + n * y;
      a(row, x) = fp::add(a(row, x), 1, p);
      a(row, y) = fp::add(a(row, y), 1, p);
      const std::uint64_t xy = g.multiply(x, y);
      a(row, xy) = fp::sub(a(row, xy), 1, p);
      rhs[row] = c.at(x, y);
    }
  const LinearSolve s = solve_linear(a, rhs);
  CoboundarySolve out;
  out.rank_a = s.rank_a;
  out.rank_augmented = s.rank_augmented;
  if (s.solution) {
    Cochain h(c.group(), 1, p);
    for (std::uint64_t x = 0; x < n; ++x)
      h.set(x, (*s.solution)[x]);
    out.h = std::move(h);
  }
  return out;
}

bool classes_equal(const Cochain &c1, const Cochain &c2) {
  return solve_coboundary(c1 - c2).h.has_value();
}

Cochain factor_set(const ExtGroup &g) {
  const RingParams &params = g.params();
  const std::uint32_t m = params.order();
  auto group = std::make_shared<const FiniteGroupTable>(FiniteGroupTable::cyclic(m));
  Cochain out(group, 2, params.p());
  if (g.flavor() == ExtFlavor::Bullet)
    for (std::uint32_t a = 0; a < m; ++a)
      for (std::uint32_t b = 0; b < m; ++b)
        if (a + b >= m)
          out.set(a, b, 1);
  return out;
}

namespace {

std::uint64_t power_index(const FiniteGroupTable &g, std::uint64_t x, std::uint32_t e) {
  std::uint64_t out = g.identity_index();
  for (std::uint32_t k = 0; k < e; ++k)
    out = g.multiply(out, x);
  return out;
}

} // namespace

BassTateReport bass_tate_skeleton(std::uint32_t p) {
  if (p != 3 && p != 5)
    throw ParamError("the skeleton check is run for p = 3 and p = 5");
  BassTateReport r;
  r.p = p;
  const RingParams params(p, 1);
  const ExtGroup h_ext(params, 2, ExtFlavor::Split);
  auto h_group = std::make_shared<const FiniteGroupTable>(FiniteGroupTable::from_ext_group(h_ext));
  auto q_group =
      std::make_shared<const FiniteGroupTable>(FiniteGroupTable::elementary_abelian(p, 2));

  // Q coordinates: 0 = tau exponent, 1 = sigma exponent
  Cochain phi(q_group, 1, p), psi(q_group, 1, p);
  for (std::uint64_t x = 0; x < q_group->size(); ++x) {
    phi.set(x, static_cast<std::int64_t>(x % p));
    psi.set(x, static_cast<std::int64_t>(x / p));
  }
  const Cochain cup = cup11(phi, psi);
  r.cup_is_cocycle = is_2cocycle(cup);
  const CoboundarySolve on_q = solve_coboundary(cup);
  r.cup_not_coboundary = !on_q.h.has_value();
  r.cup_rank_a = on_q.rank_a;
  r.cup_rank_augmented = on_q.rank_augmented;

  // (f, sigma^j) -> (f_0, j)
  std::vector<std::uint64_t> proj(h_group->size());
  for (std::uint64_t x = 0; x < h_group->size(); ++x) {
    const ExtElement e = h_ext.element_at(x);
    proj[x] = e.f[0] + static_cast<std::uint64_t>(p) * e.j;
  }
  const GroupSurjection pi(h_group, q_group, proj);
  const Cochain inflated = inflate(cup, pi);
  const CoboundarySolve on_h = solve_coboundary(inflated);
  r.inflation_is_coboundary = on_h.h.has_value();
  r.h = on_h.h;

  const std::uint64_t sigma = h_ext.index_of(h_ext.element({0, 0}, 1));
  const std::uint64_t tau = h_ext.index_of(h_ext.element({1, 0}, 0));
  const std::uint64_t omega = commutator_index(*h_group, sigma, tau);
  for (int sigma_first = 1; sigma_first >= 0; --sigma_first)
    for (int sign : {1, -1}) {
      ConventionCheck cc;
      cc.order = sigma_first ? "omega^c sigma^k tau^i" : "omega^c tau^i sigma^k";
      cc.sign = sign;
      Cochain candidate(h_group, 1, p);
      std::vector<char> hit(h_group->size(), 0);
      bool bijective = true;
      for (std::uint32_t c = 0; c < p; ++c)
        for (std::uint32_t k = 0; k < p; ++k)
          for (std::uint32_t i = 0; i < p; ++i) {
            const std::uint64_t s = power_index(*h_group, sigma, k);
            const std::uint64_t t = power_index(*h_group, tau, i);
            const std::uint64_t tail = sigma_first ? h_group->multiply(s, t) : h_group->multiply(t, s);
            const std::uint64_t x = h_group->multiply(power_index(*h_group, omega, c), tail);
            if (hit[x])
              bijective = false;
            hit[x] = 1;
            candidate.set(x, sign * static_cast<std::int64_t>(c));
          }
      cc.matches = bijective && r.h && is_1cocycle(*r.h - candidate);
      r.conventions.push_back(cc);
      if (cc.matches && !r.convention)
        r.convention = cc;
    }

  auto g3 = std::make_shared<const FiniteGroupTable>(FiniteGroupTable::elementary_abelian(p, 3));
  std::vector<std::uint64_t> drop(g3->size());
  for (std::uint64_t x = 0; x < g3->size(); ++x)
    drop[x] = x % (static_cast<std::uint64_t>(p) * p);
  const GroupSurjection pi3(g3, q_group, drop);
  r.control_not_coboundary = !solve_coboundary(inflate(cup, pi3)).h.has_value();
  return r;
}

} // namespace galmod
