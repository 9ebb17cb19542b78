#include <doctest.h>

#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "selfpower/arith.hpp"

using namespace selfpower::arith;

TEST_CASE("mod_pow") {
  CHECK(mod_pow(3, 3, 7) == 6);
  CHECK(mod_pow(4, 4, 7) == 4);
  CHECK(mod_pow(2, 0, 5) == 1);
  CHECK(mod_pow(0, 0, 5) == 1);
  CHECK(mod_pow(10, 1, 7) == 3);
  CHECK_THROWS_AS(mod_pow(2, 3, 1), std::domain_error);
  CHECK_THROWS_AS(mod_pow(2, 3, 0), std::domain_error);

  SUBCASE("matches repeated multiplication") {
    for (u64 m = 2; m < 40; ++m)
      for (u64 b = 0; b < 2 * m; ++b)
        for (u64 e = 0; e < 30; ++e) REQUIRE(mod_pow(b, e, m) == oracle::pow_naive(b, e, m));
  }

  SUBCASE("64-bit moduli use exact products") {
    const u64 m61 = (u64{1} << 61) - 1;  // prime
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
      const u64 x = 1 + rng() % (m61 - 1);
      REQUIRE(mod_pow(x, m61 - 1, m61) == 1);
    }
    // (2^62)^2 mod (2^63 - 25): checked by hand as 2^124 mod m.
    const u64 m = (u64{1} << 63) - 25;
    CHECK(mul_mod(u64{1} << 62, u64{1} << 62, m) == mod_pow(2, 124, m));
  }
}

TEST_CASE("is_prime") {
  CHECK(is_prime(100003));
  CHECK(is_prime(1000003));
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK_FALSE(is_prime(561));         // Carmichael
  CHECK_FALSE(is_prime(3215031751));  // strong pseudoprime to bases 2, 3, 5, 7
  CHECK(is_prime((u64{1} << 61) - 1));
  CHECK(is_prime(18446744073709551557ull));  // largest 64-bit prime
  CHECK_FALSE(is_prime(18446744073709551615ull));
  CHECK_FALSE(is_prime(4294967291ull * 4294967279ull));

  for (u64 n = 0; n < 20000; ++n) REQUIRE(is_prime(n) == oracle::is_prime_trial(n));
}

TEST_CASE("primes_in_range") {
  CHECK(primes_in_range(100003, 102667).size() == 238);
  CHECK(primes_in_range(1000003, 1007977).size() == 599);
  CHECK(primes_in_range(14, 16).empty());
  CHECK(primes_in_range(20, 10).empty());
  CHECK(primes_in_range(2, 2) == std::vector<u64>{2});
  CHECK(primes_in_range(0, 10) == std::vector<u64>{2, 3, 5, 7});

  SUBCASE("agrees with trial division up to 1e5") {
    std::vector<u64> expected;
    for (u64 n = 2; n <= 100000; ++n)
      if (oracle::is_prime_trial(n)) expected.push_back(n);
    CHECK(primes_in_range(2, 100000) == expected);
    // tiny segments exercise the segment boundaries
    CHECK(primes_in_range(2, 100000, 97) == expected);
  }

  SUBCASE("near 2^40") {
    const u64 lo = u64{1} << 40;
    for (u64 p : primes_in_range(lo, lo + 2000)) CHECK(is_prime(p));
    std::size_t count = 0;
    for (u64 n = lo; n <= lo + 2000; ++n) count += is_prime(n);
    CHECK(primes_in_range(lo, lo + 2000).size() == count);
  }
}

TEST_CASE("factorize") {
  CHECK(factorize(12).factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(factorize(100002).factors == std::vector<PrimePower>{{2, 1}, {3, 1}, {7, 1}, {2381, 1}});
  CHECK(factorize(1).factors.empty());
  CHECK(factorize(1).n == 1);
  CHECK_THROWS_AS(factorize(0), std::domain_error);

  SUBCASE("agrees with trial division") {
    for (u64 n = 1; n < 5000; ++n) {
      const auto f = factorize(n);
      const auto expected = oracle::factor_trial(n);
      REQUIRE(f.factors.size() == expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) {
        REQUIRE(f.factors[i].prime == expected[i].first);
        REQUIRE(f.factors[i].exponent == expected[i].second);
      }
    }
  }

  SUBCASE("large cofactors go through rho") {
    const u64 a = 4294967291ull, b = 4294967279ull;  // both prime
    CHECK(factorize(a * b).factors == std::vector<PrimePower>{{b, 1}, {a, 1}});
    const auto f = factorize((u64{1} << 61) - 2);
    u64 product = 1;
    for (const auto& [q, e] : f.factors) {
      CHECK(is_prime(q));
      for (unsigned i = 0; i < e; ++i) product *= q;
    }
    CHECK(product == (u64{1} << 61) - 2);
    CHECK(f.factors.size() == 12);
  }
}

TEST_CASE("divisors and euler_phi") {
  CHECK(divisors(factorize(6)) == std::vector<u64>{1, 2, 3, 6});
  CHECK(divisors(factorize(12)) == std::vector<u64>{1, 2, 3, 4, 6, 12});
  CHECK(divisors(factorize(1)) == std::vector<u64>{1});
  CHECK(euler_phi(factorize(12)) == 4);
  CHECK(euler_phi(factorize(7)) == 6);
  CHECK(euler_phi(factorize(1)) == 1);

  for (u64 n = 1; n < 600; ++n) {
    const auto f = factorize(n);
    REQUIRE(euler_phi(f) == oracle::phi_count(n));
    const auto divs = divisors(f);
    REQUIRE(divs.size() == f.divisor_count());
    std::vector<u64> expected;
    for (u64 d = 1; d <= n; ++d)
      if (n % d == 0) expected.push_back(d);
    REQUIRE(divs == expected);
    const auto dfs = divisor_factorizations(f);
    REQUIRE(dfs.size() == divs.size());
    u64 phi_sum = 0;
    for (std::size_t i = 0; i < dfs.size(); ++i) {
      REQUIRE(dfs[i] == factorize(divs[i]));
      phi_sum += euler_phi(dfs[i]);
    }
    REQUIRE(phi_sum == n);  // Gauss: sum of phi over divisors
  }
}

TEST_CASE("multiplicative_order and has_order") {
  const auto f6 = factorize(6);
  CHECK(multiplicative_order(2, 7, f6) == 3);
  CHECK(multiplicative_order(4, 7, f6) == 3);
  CHECK(multiplicative_order(1, 7, f6) == 1);
  CHECK(multiplicative_order(6, 7, f6) == 2);
  CHECK_THROWS_AS(multiplicative_order(7, 7, f6), std::domain_error);
  CHECK_THROWS_AS(multiplicative_order(0, 7, f6), std::domain_error);

  CHECK(has_order(4, 3, 7, factorize(3)));
  CHECK_FALSE(has_order(6, 3, 7, factorize(3)));
  CHECK(has_order(1, 1, 7, factorize(1)));
  CHECK(has_order(1, 1, 101, factorize(1)));

  SUBCASE("Lagrange and phi(d) elements of each order, primes below 1e4") {
    for (u64 p : primes_in_range(2, 10000)) {
      const auto pm1 = factorize(p - 1);
      std::vector<u64> per_order(p, 0);
      for (u64 x = 1; x < p; ++x) {
        const u64 d = multiplicative_order(x, p, pm1);
        REQUIRE((p - 1) % d == 0);
        ++per_order[d];
      }
      for (const auto& fd : divisor_factorizations(pm1)) REQUIRE(per_order[fd.n] == euler_phi(fd));
    }
  }

  SUBCASE("has_order agrees with a naive order search") {
    for (u64 p : primes_in_range(2, 400)) {
      const auto pm1 = factorize(p - 1);
      for (const auto& fd : divisor_factorizations(pm1)) {
        u64 count = 0;
        for (u64 x = 1; x < p; ++x) {
          const bool h = has_order(x, fd.n, p, fd);
          REQUIRE(h == (oracle::order_naive(x, p) == fd.n));
          count += h;
        }
        REQUIRE(count == euler_phi(fd));
      }
    }
  }

  SUBCASE("Fermat on random samples") {
    std::mt19937_64 rng(11);
    for (u64 p : primes_in_range(1000003, 1001000)) {
      for (int i = 0; i < 20; ++i) REQUIRE(mod_pow(1 + rng() % (p - 1), p - 1, p) == 1);
    }
  }
}
