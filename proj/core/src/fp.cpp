#include "galmod/fp.hpp"

#include <limits>

namespace galmod::fp {

Residue pow(Residue a, std::uint64_t e, Residue p) {
  Residue result = 1 % p;
  Residue base = a % p;
  while (e > 0) {
    if (e & 1U)
      result = mul(result, base, p);
    base = mul(base, base, p);
    e >>= 1U;
  }
  return result;
}

Residue inv(Residue a, Residue p) { return pow(a, p - 2, p); }

bool is_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

bool checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t &out) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      return false;
    r *= base;
  }
  out = r;
  return true;
}

namespace {

Residue small_binom(std::uint64_t n, std::uint64_t k, Residue p) {
  // n, k < p here
  if (k > n)
    return 0;
  Residue num = 1, den = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    num = mul(num, static_cast<Residue>((n - i) % p), p);
    den = mul(den, static_cast<Residue>((i + 1) % p), p);
  }
  return mul(num, inv(den, p), p);
}

} // namespace

Residue binom_mod(std::uint64_t n, std::uint64_t k, Residue p) {
  if (k > n)
    return 0;
  Residue r = 1;
  while (n > 0 || k > 0) {
    const std::uint64_t ni = n % p, ki = k % p;
    if (ki > ni)
      return 0;
    r = mul(r, small_binom(ni, ki, p), p);
    n /= p;
    k /= p;
  }
  return r;
}

} // namespace galmod::fp
