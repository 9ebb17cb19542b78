#include "selfpower/arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace selfpower::arith {

namespace {

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) <= 0xFFFFFFFFull && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Small primes for trial division, computed once.
const std::vector<u64>& small_primes() {
  static const std::vector<u64> primes = [] {
    constexpr u64 kLimit = 1 << 12;
    std::vector<bool> composite(kLimit + 1, false);
    std::vector<u64> out;
    for (u64 i = 2; i <= kLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (u64 j = i * i; j <= kLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

bool miller_rabin_witness(u64 n, u64 d, unsigned s, u64 a) {
  a %= n;
  if (a == 0) return true;
  u64 x = mod_pow(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

// Brent's cycle-finding variant of Pollard rho. n must be odd composite.
u64 pollard_brent(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  if (n % 2 == 0) {
    out.push_back(2);
    factor_into(n / 2, out);
    return;
  }
  u64 d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

u64 Factorization::divisor_count() const {
  u64 count = 1;
  for (const auto& pe : factors) count *= pe.exponent + 1;
  return count;
}

u64 mod_pow(u64 base, u64 exponent, u64 modulus) {
  if (modulus < 2) throw std::domain_error("mod_pow: modulus must be >= 2");
  u64 result = 1;
  base %= modulus;
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, base, modulus);
    base = mul_mod(base, base, modulus);
    exponent >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;

  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Jim Sinclair's base set: deterministic below 2^64.
  static constexpr std::array<u64, 7> kBases = {
      2, 325, 9375, 28178, 450775, 9780504, 1795265022};
  for (u64 a : kBases) {
    if (!miller_rabin_witness(n, d, s, a)) return false;
  }
  return true;
}

std::vector<u64> primes_in_range(u64 lo, u64 hi, std::size_t segment) {
  std::vector<u64> out;
  lo = std::max<u64>(lo, 2);
  if (lo > hi) return out;
  if (segment == 0) segment = kDefaultSegment;

  const u64 root = isqrt(hi);
  std::vector<u64> base;
  {
    std::vector<bool> composite(root + 1, false);
    for (u64 i = 2; i <= root; ++i) {
      if (composite[i]) continue;
      base.push_back(i);
      for (u64 j = i * i; j <= root; j += i) composite[j] = true;
    }
  }

  std::vector<unsigned char> mark(segment);
  for (u64 low = lo;; low += segment) {
    const u64 high = (hi - low < segment - 1) ? hi : low + segment - 1;
    const std::size_t len = high - low + 1;
    std::fill_n(mark.begin(), len, 1);
    for (u64 p : base) {
      if (p * p > high) break;
      u64 start = std::max(p * p, (low + p - 1) / p * p);
      for (u64 j = start; j <= high; j += p) mark[j - low] = 0;
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (mark[i]) out.push_back(low + i);
    }
    if (high == hi) break;
  }
  return out;
}

Factorization factorize(u64 n) {
  if (n == 0) throw std::domain_error("factorize: n must be >= 1");
  Factorization f{n, {}};
  std::vector<u64> primes;
  u64 rest = n;
  for (u64 p : small_primes()) {
    if (p * p > rest) break;
    while (rest % p == 0) {
      primes.push_back(p);
      rest /= p;
    }
  }
  factor_into(rest, primes);
  std::sort(primes.begin(), primes.end());
  for (u64 p : primes) {
    if (!f.factors.empty() && f.factors.back().prime == p) {
      ++f.factors.back().exponent;
    } else {
      f.factors.push_back({p, 1});
    }
  }
  return f;
}

std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> out{1};
  out.reserve(f.divisor_count());
  for (const auto& [prime, exponent] : f.factors) {
    const std::size_t existing = out.size();
    u64 power = 1;
    for (unsigned e = 1; e <= exponent; ++e) {
      power *= prime;
      for (std::size_t i = 0; i < existing; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Factorization> divisor_factorizations(const Factorization& f) {
  std::vector<Factorization> out{Factorization{}};
  out.reserve(f.divisor_count());
  for (const auto& [prime, exponent] : f.factors) {
    const std::size_t existing = out.size();
    u64 power = 1;
    for (unsigned e = 1; e <= exponent; ++e) {
      power *= prime;
      for (std::size_t i = 0; i < existing; ++i) {
        Factorization g = out[i];
        g.n *= power;
        g.factors.push_back({prime, e});
        out.push_back(std::move(g));
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Factorization& a, const Factorization& b) { return a.n < b.n; });
  return out;
}

u64 euler_phi(const Factorization& f) {
  u64 phi = 1;
  for (const auto& [prime, exponent] : f.factors) {
    phi *= prime - 1;
    for (unsigned e = 1; e < exponent; ++e) phi *= prime;
  }
  return phi;
}

u64 multiplicative_order(u64 x, u64 p, const Factorization& pm1) {
  if (x % p == 0) {
    throw std::domain_error("multiplicative_order: x is divisible by p");
  }
  u64 order = pm1.n;
  for (const auto& [prime, exponent] : pm1.factors) {
    for (unsigned e = 0; e < exponent; ++e) {
      if (mod_pow(x, order / prime, p) != 1) break;
      order /= prime;
    }
  }
  return order;
}

bool has_order(u64 x, u64 d, u64 p, const Factorization& fd) {
  if (mod_pow(x, d, p) != 1) return false;
  for (const auto& pe : fd.factors) {
    if (mod_pow(x, d / pe.prime, p) == 1) return false;
  }
  return true;
}

}  // namespace selfpower::arith
