#pragma once

// Exact 64-bit integer arithmetic: primality, sieving, factorization,
// divisors, Euler phi, modular exponentiation and multiplicative order.
//
// Every routine is exact for moduli below 2^63. Products are formed in
// 128-bit intermediates; when the modulus fits in 32 bits the cheaper
// 64-bit path is taken.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace selfpower::arith {

using u64 = std::uint64_t;

struct PrimePower {
  u64 prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// An integer together with its complete prime-power decomposition.
/// Primes are strictly increasing; n == 1 has an empty factor list.
struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;

  /// Number of divisors (sigma_0).
  u64 divisor_count() const;
  /// Number of distinct prime factors (omega).
  std::size_t distinct_primes() const { return factors.size(); }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  if (m <= 0xFFFFFFFFull) return (a * b) % m;  // a, b < m < 2^32
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

/// base^exponent mod modulus. Throws std::domain_error if modulus < 2.
u64 mod_pow(u64 base, u64 exponent, u64 modulus);

/// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(u64 n);

inline constexpr std::size_t kDefaultSegment = std::size_t{1} << 16;

/// All primes in the closed interval [lo, hi], ascending, by a segmented
/// sieve of Eratosthenes. Returns an empty list when lo > hi.
std::vector<u64> primes_in_range(u64 lo, u64 hi,
                                 std::size_t segment = kDefaultSegment);

/// Complete factorization: trial division by small primes, then Brent's
/// variant of Pollard rho on the cofactor. Every reported prime is
/// certified by is_prime. Throws std::domain_error for n == 0.
Factorization factorize(u64 n);

/// All divisors of f.n in ascending order.
std::vector<u64> divisors(const Factorization& f);

/// Factorizations of every divisor of f.n, ascending by value. Derived
/// from f without further factoring.
std::vector<Factorization> divisor_factorizations(const Factorization& f);

u64 euler_phi(const Factorization& f);

/// Least d > 0 with x^d == 1 (mod p), found by starting from p - 1 and
/// stripping prime factors while the power stays 1. `pm1` must be the
/// factorization of p - 1. Throws std::domain_error if p divides x.
u64 multiplicative_order(u64 x, u64 p, const Factorization& pm1);

/// True iff ord_p(x) == d, where d | p - 1 and `fd` factors d. Costs one
/// exponentiation, plus one per prime factor of d when x^d == 1.
bool has_order(u64 x, u64 d, u64 p, const Factorization& fd);

}  // namespace selfpower::arith
