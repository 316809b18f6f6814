#pragma once

// Scalar arithmetic in F_p for small primes. Residues are least
// non-negative representatives held in uint32_t.

#include <cstdint>
#include <vector>

namespace galmod::fp {

using Residue = std::uint32_t;

inline Residue add(Residue a, Residue b, Residue p) {
  const Residue s = a + b;
  return s >= p ? s - p : s;
}

inline Residue sub(Residue a, Residue b, Residue p) {
  return a >= b ? a - b : a + p - b;
}

inline Residue neg(Residue a, Residue p) { return a == 0 ? 0 : p - a; }

inline Residue mul(Residue a, Residue b, Residue p) {
  return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % p);
}

/// Reduce an arbitrary signed integer into [0, p).
inline Residue reduce(std::int64_t x, Residue p) {
  const std::int64_t r = x % static_cast<std::int64_t>(p);
  return static_cast<Residue>(r < 0 ? r + p : r);
}

Residue pow(Residue a, std::uint64_t e, Residue p);

/// Inverse of a nonzero residue (Fermat).
Residue inv(Residue a, Residue p);

bool is_prime(std::uint64_t n);

/// Integer power with overflow detection; returns false on overflow.
bool checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t &out);

/// Binomial coefficient C(n, k) mod p via Lucas' theorem.
Residue binom_mod(std::uint64_t n, std::uint64_t k, Residue p);

} // namespace galmod::fp
