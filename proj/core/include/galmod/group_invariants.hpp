#pragma once

// Isomorphism invariants of small finite groups presented by index-level
// multiplication. Works with any type providing
//
//   std::uint64_t size() const;
//   std::uint64_t multiply(std::uint64_t a, std::uint64_t b) const;
//   std::uint64_t identity_index() const;
//   std::uint64_t inverse_index(std::uint64_t a) const;
//   std::vector<std::uint64_t> generator_indices() const;

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

namespace galmod {

struct Fingerprint {
  std::uint64_t order = 0;
  bool abelian = false;
  std::uint64_t exponent = 0;
  /// element order -> number of elements of that order
  std::map<std::uint64_t, std::uint64_t> order_census;
  std::uint64_t center_size = 0;
  std::uint64_t derived_size = 0;

  bool operator==(const Fingerprint &) const = default;
};

template <class G>
concept IndexedGroup = requires(const G &g, std::uint64_t a) {
  { g.size() } -> std::convertible_to<std::uint64_t>;
  { g.multiply(a, a) } -> std::convertible_to<std::uint64_t>;
  { g.identity_index() } -> std::convertible_to<std::uint64_t>;
  { g.inverse_index(a) } -> std::convertible_to<std::uint64_t>;
  { g.generator_indices() } -> std::convertible_to<std::vector<std::uint64_t>>;
};

template <IndexedGroup G>
std::uint64_t element_order(const G &g, std::uint64_t a) {
  const std::uint64_t e = g.identity_index();
  std::uint64_t cur = a, ord = 1;
  while (cur != e) {
    cur = g.multiply(cur, a);
    ++ord;
  }
  return ord;
}

template <IndexedGroup G>
std::uint64_t commutator_index(const G &g, std::uint64_t a, std::uint64_t b) {
  // [a, b] = a b a^{-1} b^{-1}
  return g.multiply(g.multiply(g.multiply(a, b), g.inverse_index(a)), g.inverse_index(b));
}

/// Membership vector of the subgroup generated by `gens`.
template <IndexedGroup G>
std::vector<bool> subgroup_closure(const G &g, const std::vector<std::uint64_t> &gens) {
  std::vector<bool> in(g.size(), false);
  std::vector<std::uint64_t> queue{g.identity_index()};
  in[g.identity_index()] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint64_t x = queue[head];
    for (auto s : gens) {
      const std::uint64_t y = g.multiply(x, s);
      if (!in[y]) {
        in[y] = true;
        queue.push_back(y);
      }
    }
  }
  return in;
}

template <IndexedGroup G>
std::vector<bool> normal_closure(const G &g, std::vector<std::uint64_t> gens) {
  const auto group_gens = g.generator_indices();
  for (;;) {
    auto in = subgroup_closure(g, gens);
    bool grew = false;
    for (std::uint64_t h = 0; h < g.size() && !grew; ++h) {
      if (!in[h])
        continue;
      for (auto x : group_gens) {
        const std::uint64_t c = g.multiply(g.multiply(x, h), g.inverse_index(x));
        if (!in[c]) {
          gens.push_back(c);
          grew = true;
          break;
        }
      }
    }
    if (!grew)
      return in;
  }
}

template <IndexedGroup G>
Fingerprint compute_fingerprint(const G &g) {
  Fingerprint fp;
  fp.order = g.size();
  const auto gens = g.generator_indices();

  fp.abelian = true;
  for (std::size_t i = 0; i < gens.size() && fp.abelian; ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (g.multiply(gens[i], gens[j]) != g.multiply(gens[j], gens[i])) {
        fp.abelian = false;
        break;
      }

  fp.exponent = 1;
  for (std::uint64_t a = 0; a < g.size(); ++a) {
    const std::uint64_t ord = element_order(g, a);
    ++fp.order_census[ord];
    fp.exponent = std::lcm(fp.exponent, ord);
  }

  for (std::uint64_t a = 0; a < g.size(); ++a) {
    bool central = true;
    for (auto x : gens)
      if (g.multiply(a, x) != g.multiply(x, a)) {
        central = false;
        break;
      }
    if (central)
      ++fp.center_size;
  }

  std::vector<std::uint64_t> comms;
  for (auto x : gens)
    for (auto y : gens)
      comms.push_back(commutator_index(g, x, y));
  const auto derived = normal_closure(g, comms);
  for (bool b : derived)
    fp.derived_size += b ? 1 : 0;
  return fp;
}

} // namespace galmod
