#include "galmod/extgroup.hpp"

#include <algorithm>
#include <set>

#include "galmod/error.hpp"

namespace galmod {

std::string to_string(ExtFlavor flavor) {
  return flavor == ExtFlavor::Split ? "split" : "bullet";
}

ExtFlavor parse_flavor(const std::string &name) {
  if (name == "split")
    return ExtFlavor::Split;
  if (name == "bullet")
    return ExtFlavor::Bullet;
  throw ParamError("unknown extension flavor '" + name + "' (expected split|bullet)");
}

ExtGroup::ExtGroup(const RingParams &params, std::uint32_t ell, ExtFlavor flavor)
    : params_(params), ell_(ell), flavor_(flavor) {
  if (ell < 1 || ell > params.order())
    throw ParamError("ExtGroup: l must lie in [1, p^n]");
  if (flavor == ExtFlavor::Bullet && ell == params.order())
    throw ParamError("ExtGroup: A_{p^n} admits only the split extension");
  if (!fp::checked_pow(params.p(), ell, kernel_order_) ||
      kernel_order_ > UINT64_MAX / params.order())
    throw ParamError("ExtGroup: group order does not fit in 64 bits");
  order_ = kernel_order_ * params.order();
  sigma_table_.resize(std::size_t{params.order()} * ell_);
  for (std::uint32_t j = 0; j < params.order(); ++j)
    for (std::uint32_t k = 0; k < ell_; ++k)
      sigma_table_[std::size_t{j} * ell_ + k] = fp::binom_mod(j, k, params.p());
}

ExtElement ExtGroup::element(const std::vector<std::int64_t> &f, std::int64_t j) const {
  if (f.size() > ell_)
    throw ParamError("ExtGroup::element: kernel vector longer than l");
  ExtElement g;
  g.f.assign(ell_, 0);
  for (std::size_t k = 0; k < f.size(); ++k)
    g.f[k] = fp::reduce(f[k], params_.p());
  const auto order = static_cast<std::int64_t>(params_.order());
  g.j = static_cast<std::uint32_t>(((j % order) + order) % order);
  return g;
}

ExtElement ExtGroup::identity() const { return element({}, 0); }

bool ExtGroup::contains(const ExtElement &g) const {
  if (g.f.size() != ell_ || g.j >= params_.order())
    return false;
  return std::all_of(g.f.begin(), g.f.end(), [&](auto c) { return c < params_.p(); });
}

void ExtGroup::require_member(const ExtElement &g) const {
  if (!contains(g))
    throw ParamError("ExtGroup: element does not belong to this group");
}

std::vector<fp::Residue> ExtGroup::sigma_act(std::uint32_t j,
                                             const std::vector<fp::Residue> &f) const {
  const auto p = params_.p();
  const fp::Residue *row = &sigma_table_[std::size_t{j % params_.order()} * ell_];
  std::vector<fp::Residue> out(ell_, 0);
  for (std::uint32_t a = 0; a < ell_; ++a) {
    if (row[a] == 0)
      continue;
    for (std::uint32_t b = 0; a + b < ell_; ++b)
      if (f[b] != 0)
        out[a + b] = fp::add(out[a + b], fp::mul(row[a], f[b], p), p);
  }
  return out;
}

ExtElement ExtGroup::mul(const ExtElement &a, const ExtElement &b) const {
  require_member(a);
  require_member(b);
  const auto p = params_.p();
  ExtElement out;
  out.f = sigma_act(a.j, b.f);
  for (std::uint32_t k = 0; k < ell_; ++k)
    out.f[k] = fp::add(out.f[k], a.f[k], p);
  const std::uint64_t jsum = std::uint64_t{a.j} + b.j;
  if (flavor_ == ExtFlavor::Bullet && jsum >= params_.order())
    out.f[ell_ - 1] = fp::add(out.f[ell_ - 1], 1, p);
  out.j = static_cast<std::uint32_t>(jsum % params_.order());
  return out;
}

ExtElement ExtGroup::inverse(const ExtElement &g) const {
  require_member(g);
  if (flavor_ == ExtFlavor::Split) {
    // (f, j)^{-1} = (-sigma^{-j} f, -j)
    const std::uint32_t jinv = (params_.order() - g.j) % params_.order();
    auto f = sigma_act(jinv, g.f);
    for (auto &c : f)
      c = fp::neg(c, params_.p());
    return ExtElement{std::move(f), jinv};
  }
  // bounded search along the cyclic subgroup <g>
  const ExtElement e = identity();
  ExtElement prev = e;
  ExtElement cur = g;
  for (std::uint64_t steps = 0; steps < order_; ++steps) {
    if (cur == e)
      return prev;
    prev = cur;
    cur = mul(cur, g);
  }
  throw Error("ExtGroup::inverse: element order exceeds the group order");
}

ExtElement ExtGroup::power(const ExtElement &g, std::uint64_t m) const {
  ExtElement result = identity();
  ExtElement base = g;
  while (m > 0) {
    if (m & 1U)
      result = mul(result, base);
    m >>= 1U;
    if (m > 0)
      base = mul(base, base);
  }
  return result;
}

ExtElement ExtGroup::commutator(const ExtElement &a, const ExtElement &b) const {
  return mul(mul(mul(a, b), inverse(a)), inverse(b));
}

std::uint64_t ExtGroup::index_of(const ExtElement &g) const {
  require_member(g);
  std::uint64_t idx = 0;
  for (std::uint32_t k = ell_; k-- > 0;)
    idx = idx * params_.p() + g.f[k];
  return std::uint64_t{g.j} * kernel_order_ + idx;
}

ExtElement ExtGroup::element_at(std::uint64_t index) const {
  if (index >= order_)
    throw ParamError("ExtGroup::element_at: index out of range");
  ExtElement g;
  g.j = static_cast<std::uint32_t>(index / kernel_order_);
  std::uint64_t rest = index % kernel_order_;
  g.f.resize(ell_);
  for (std::uint32_t k = 0; k < ell_; ++k) {
    g.f[k] = static_cast<fp::Residue>(rest % params_.p());
    rest /= params_.p();
  }
  return g;
}

std::uint64_t ExtGroup::multiply(std::uint64_t a, std::uint64_t b) const {
  return index_of(mul(element_at(a), element_at(b)));
}

std::uint64_t ExtGroup::inverse_index(std::uint64_t a) const {
  return index_of(inverse(element_at(a)));
}

std::vector<std::uint64_t> ExtGroup::generator_indices() const {
  return {index_of(element({1}, 0)), index_of(element({}, 1))};
}

std::uint64_t carry(std::uint64_t j, std::uint64_t m, const RingParams &params) {
  if (m < 1)
    throw ParamError("carry: m must be at least 1");
  const std::uint64_t order = params.order();
  j %= order;
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k < m; ++k)
    if ((k * j) % order + j >= order)
      ++c;
  return c;
}

ExtElement power_closed_form(const ExtGroup &g, const ExtElement &x, std::uint64_t m) {
  if (m == 0)
    return g.identity();
  const auto p = g.params().p();
  const std::uint64_t order = g.params().order();
  std::vector<fp::Residue> f(g.ell(), 0);
  for (std::uint64_t k = 0; k < m; ++k) {
    const auto term = g.sigma_act(static_cast<std::uint32_t>((k * x.j) % order), x.f);
    for (std::uint32_t i = 0; i < g.ell(); ++i)
      f[i] = fp::add(f[i], term[i], p);
  }
  if (g.flavor() == ExtFlavor::Bullet) {
    const auto c = static_cast<fp::Residue>(carry(x.j, m, g.params()) % p);
    f[g.ell() - 1] = fp::add(f[g.ell() - 1], c, p);
  }
  return ExtElement{std::move(f), static_cast<std::uint32_t>((m * x.j) % order)};
}

Fingerprint fingerprint(const ExtGroup &g, std::uint64_t guard) {
  if (g.order() > guard)
    throw GuardError("fingerprint: group order " + std::to_string(g.order()) +
                     " exceeds the guard " + std::to_string(guard));
  return compute_fingerprint(g);
}

std::string to_string(NamedGroup name) {
  switch (name) {
  case NamedGroup::Hp3:
    return "H_p3";
  case NamedGroup::Mp3:
    return "M_p3";
  case NamedGroup::Mpn:
    return "M_pn";
  case NamedGroup::ZpxZp:
    return "ZpxZp";
  case NamedGroup::Zp2:
    return "Zp2";
  }
  return "?";
}

NamedGroup parse_named_group(const std::string &name) {
  for (auto n : {NamedGroup::Hp3, NamedGroup::Mp3, NamedGroup::Mpn, NamedGroup::ZpxZp,
                 NamedGroup::Zp2})
    if (to_string(n) == name)
      return n;
  throw ParamError("unknown group name '" + name + "'");
}

namespace {

/// k with p^k == x, or -1.
int log_p(std::uint64_t x, std::uint64_t p) {
  int k = 0;
  while (x > 1) {
    if (x % p != 0)
      return -1;
    x /= p;
    ++k;
  }
  return x == 1 ? k : -1;
}

} // namespace

bool matches_profile(const Fingerprint &fp, std::uint32_t p, NamedGroup name) {
  const std::uint64_t p2 = std::uint64_t{p} * p, p3 = p2 * p;
  switch (name) {
  case NamedGroup::Hp3:
    return fp.order == p3 && !fp.abelian && fp.exponent == p;
  case NamedGroup::Mp3:
    return fp.order == p3 && !fp.abelian && fp.exponent == p2;
  case NamedGroup::Mpn: {
    const int k = log_p(fp.order, p);
    if (k < 3 || fp.abelian)
      return false;
    std::uint64_t target = 1;
    for (int i = 0; i < k - 1; ++i)
      target *= p;
    return fp.order_census.contains(target);
  }
  case NamedGroup::ZpxZp:
    return fp.order == p2 && fp.abelian && fp.exponent == p;
  case NamedGroup::Zp2:
    return fp.order == p2 && fp.abelian && fp.exponent == p2;
  }
  return false;
}

bool is_named(const ExtGroup &g, NamedGroup name, std::uint64_t guard) {
  return matches_profile(fingerprint(g, guard), g.params().p(), name);
}

namespace {

struct SubgroupSearch {
  const std::vector<std::uint64_t> &table; // N x N
  std::uint64_t n;
  std::uint32_t p;
  std::uint32_t target_rank;
  const std::vector<std::uint64_t> &omega;
  std::set<SubgroupIndices> found;

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return table[a * n + b]; }

  void dfs(const std::vector<std::uint64_t> &span, const std::vector<bool> &in,
           const std::vector<std::uint64_t> &gens, std::size_t next, std::uint32_t rank) {
    if (rank == target_rank) {
      SubgroupIndices h = span;
      std::sort(h.begin(), h.end());
      found.insert(std::move(h));
      return;
    }
    for (std::size_t i = next; i < omega.size(); ++i) {
      const std::uint64_t g = omega[i];
      if (in[g])
        continue;
      bool commutes = true;
      for (auto x : gens)
        if (mul(x, g) != mul(g, x)) {
          commutes = false;
          break;
        }
      if (!commutes)
        continue;
      // new span = union of cosets span * g^c for c = 0..p-1
      std::vector<std::uint64_t> bigger;
      bigger.reserve(span.size() * p);
      std::vector<bool> in2 = in;
      std::uint64_t gc = g;
      bigger.insert(bigger.end(), span.begin(), span.end());
      for (std::uint32_t c = 1; c < p; ++c) {
        for (auto s : span) {
          const std::uint64_t y = mul(s, gc);
          in2[y] = true;
          bigger.push_back(y);
        }
        gc = mul(gc, g);
      }
      auto gens2 = gens;
      gens2.push_back(g);
      dfs(bigger, in2, gens2, i + 1, rank + 1);
    }
  }
};

} // namespace

std::vector<SubgroupIndices> elem_abelian_normal_with_cyclic_quotient(const ExtGroup &g,
                                                                      std::uint64_t guard) {
  if (g.order() > guard)
    throw GuardError("elem_abelian_normal_with_cyclic_quotient: group order " +
                     std::to_string(g.order()) + " exceeds the guard " +
                     std::to_string(guard));
  const std::uint64_t n = g.order();
  const std::uint32_t p = g.params().p();
  std::vector<std::uint64_t> table(n * n);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b)
      table[a * n + b] = g.multiply(a, b);
  auto mul = [&](std::uint64_t a, std::uint64_t b) { return table[a * n + b]; };
  auto pw = [&](std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 0;
    for (std::uint64_t k = 0; k < e; ++k)
      r = mul(r, a);
    return r;
  };

  std::vector<std::uint64_t> omega;
  for (std::uint64_t a = 1; a < n; ++a)
    if (pw(a, p) == 0)
      omega.push_back(a);

  SubgroupSearch search{table, n, p, g.ell(), omega, {}};
  std::vector<bool> in(n, false);
  in[0] = true;
  search.dfs({0}, in, {}, 0, 0);

  std::vector<std::uint64_t> inv(n);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b)
      if (mul(a, b) == 0) {
        inv[a] = b;
        break;
      }
  const auto gens = g.generator_indices();
  const std::uint64_t top = g.params().order() / p; // p^{n-1}

  std::vector<SubgroupIndices> out;
  for (const auto &h : search.found) {
    std::vector<bool> member(n, false);
    for (auto x : h)
      member[x] = true;
    bool normal = true;
    for (auto x : gens) {
      for (auto y : h)
        if (!member[mul(mul(x, y), inv[x])]) {
          normal = false;
          break;
        }
      if (!normal)
        break;
    }
    if (!normal)
      continue;
    bool cyclic = false;
    for (std::uint64_t a = 0; a < n && !cyclic; ++a)
      if (!member[pw(a, top)])
        cyclic = true;
    if (cyclic)
      out.push_back(h);
  }
  return out;
}

} // namespace galmod
