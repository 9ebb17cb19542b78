#include "selfpower/fixed_points.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace selfpower {

using arith::divisor_factorizations;
using arith::euler_phi;
using arith::factorize;
using arith::has_order;
using arith::mod_pow;
using arith::multiplicative_order;

FixedPointProfile::FixedPointProfile(u64 p, Factorization pm1,
                                     std::vector<OrderCount> counts, u64 ord2)
    : p_(p), pm1_(std::move(pm1)), counts_(std::move(counts)), ord2_(ord2) {
  if (p_ < 2 || pm1_.n != p_ - 1) {
    throw std::invalid_argument(fmt::format("profile {}: p-1 factorization is for {}", p_, pm1_.n));
  }
  u64 product = 1;
  u64 last = 1;
  for (const auto& [prime, exponent] : pm1_.factors) {
    if (prime <= last || exponent == 0 || !arith::is_prime(prime)) {
      throw std::invalid_argument(fmt::format("profile {}: bad factor {}^{}", p_, prime, exponent));
    }
    for (unsigned e = 0; e < exponent; ++e) product *= prime;
    last = prime;
  }
  if (product != pm1_.n) {
    throw std::invalid_argument(fmt::format("profile {}: factors multiply to {}", p_, product));
  }
  const auto divs = arith::divisors(pm1_);
  if (divs.size() != counts_.size()) {
    throw std::invalid_argument(
        fmt::format("profile {}: {} counts for {} divisors", p_, counts_.size(), divs.size()));
  }
  for (std::size_t i = 0; i < divs.size(); ++i) {
    if (counts_[i].d != divs[i]) {
      throw std::invalid_argument(
          fmt::format("profile {}: expected divisor {}, found {}", p_, divs[i], counts_[i].d));
    }
    total_ += counts_[i].fixed;
  }
}

bool FixedPointProfile::has_divisor(u64 d) const {
  return std::binary_search(counts_.begin(), counts_.end(), OrderCount{d, 0},
                            [](const OrderCount& a, const OrderCount& b) { return a.d < b.d; });
}

u64 FixedPointProfile::count(u64 d) const {
  auto it = std::lower_bound(counts_.begin(), counts_.end(), d,
                             [](const OrderCount& a, u64 v) { return a.d < v; });
  if (it == counts_.end() || it->d != d) {
    throw std::out_of_range(fmt::format("{} does not divide {}", d, pm1_.n));
  }
  return it->fixed;
}

std::vector<u64> fixed_points_bruteforce(u64 p) {
  std::vector<u64> out;
  for (u64 x = 1; x < p; ++x) {
    if (mod_pow(x, x, p) == x) out.push_back(x);
  }
  return out;
}

FixedPointProfile fixed_point_profile(u64 p) { return fixed_point_profile(p, factorize(p - 1)); }

FixedPointProfile fixed_point_profile(u64 p, const Factorization& pm1) {
  std::vector<OrderCount> counts;
  counts.reserve(pm1.divisor_count());
  for (const Factorization& fd : divisor_factorizations(pm1)) {
    const u64 d = fd.n;
    u64 fixed = 0;
    for (u64 x = 1; x <= p - d; x += d) {
      if (has_order(x, d, p, fd)) ++fixed;
    }
    counts.push_back({d, fixed});
  }
  const u64 ord2 = p > 2 ? multiplicative_order(2, p, pm1) : 0;
  return FixedPointProfile(p, pm1, std::move(counts), ord2);
}

bool is_fixed_point_by_order(u64 x, u64 p, const Factorization& pm1) {
  const u64 order = multiplicative_order(x, p, pm1);
  return x % order == 1 % order;
}

bool is_fixed_point_by_order(u64 x, u64 p) { return is_fixed_point_by_order(x, p, factorize(p - 1)); }

u64 g_count_formula(const Factorization& pm1) {
  u64 total = 0;
  for (const Factorization& fn : divisor_factorizations(pm1)) {
    const u64 term = (pm1.n / fn.n) * euler_phi(fn);
    if (__builtin_add_overflow(total, term, &total)) {
      throw std::overflow_error("g_count_formula: result exceeds 64 bits");
    }
  }
  return total;
}

u64 g_count_formula(u64 p) { return g_count_formula(factorize(p - 1)); }

u64 g_count_bruteforce(u64 p) {
  if (p - 1 > kGOracleBudget / p) {
    throw std::length_error(
        fmt::format("g_count_bruteforce: (p-1)p for p={} exceeds the oracle budget {}", p,
                    kGOracleBudget));
  }
  // x in [1, (p-1)p] corresponds one-to-one (CRT) to r = x mod p and
  // s = x mod (p-1), and x^x == r^s (mod p) by Fermat. Walk each r^s with a
  // running product instead of exponentiating per x.
  u64 count = 0;
  for (u64 r = 1; r < p; ++r) {
    u64 power = 1;
    for (u64 s = 0; s < p - 1; ++s) {
      if (power == r) ++count;
      power = arith::mul_mod(power, r, p);
    }
  }
  return count;
}

namespace theorem {
std::vector<std::string> all() {
  return {kConsistency, kF1, kF2, kFpm1, kFHalf, kF3, kF4, kF6, kFQuarter, kFThird};
}
}  // namespace theorem

TheoremReport verify_exact_theorems(const FixedPointProfile& profile) {
  TheoremReport report{profile.p(), {}};
  const u64 p = profile.p();
  const u64 n = p - 1;
  auto fail = [&](const char* id, std::string detail) {
    report.violations.push_back({id, std::move(detail)});
  };

  for (const Factorization& fd : divisor_factorizations(profile.pm1())) {
    const u64 phi = euler_phi(fd);
    if (profile.count(fd.n) > phi) {
      fail(theorem::kConsistency,
           fmt::format("F_{} = {} exceeds phi({}) = {}", fd.n, profile.count(fd.n), fd.n, phi));
    }
  }

  if (profile.count(1) != 1) fail(theorem::kF1, fmt::format("F_1 = {}", profile.count(1)));
  if (profile.has_divisor(2) && profile.count(2) != 0) {
    fail(theorem::kF2, fmt::format("F_2 = {}", profile.count(2)));
  }
  if (n != 1 && profile.count(n) != 0) {
    fail(theorem::kFpm1, fmt::format("F_{} = {}", n, profile.count(n)));
  }
  if (n % 2 == 0 && n / 2 != 1) {
    const u64 half = n / 2;
    const u64 r = profile.p_mod_8();
    const u64 expected = ((r == 1 || r == 7) && profile.ord2() == half) ? 1 : 0;
    if (profile.count(half) != expected) {
      fail(theorem::kFHalf, fmt::format("F_{} = {}, expected {} (p mod 8 = {}, ord2 = {})", half,
                                        profile.count(half), expected, r, profile.ord2()));
    }
  }
  if (profile.has_divisor(3) && profile.count(3) > 1) {
    fail(theorem::kF3, fmt::format("F_3 = {}", profile.count(3)));
  }
  if (profile.has_divisor(4) && profile.count(4) > 1) {
    fail(theorem::kF4, fmt::format("F_4 = {}", profile.count(4)));
  }
  if (profile.has_divisor(6) && profile.count(6) != 0 && profile.count(6) != 2) {
    fail(theorem::kF6, fmt::format("F_6 = {}", profile.count(6)));
  }
  if (n % 4 == 0) {
    const u64 quarter = n / 4;
    const u64 bound = profile.p_mod_8() == 1 ? 2 : 1;
    if (profile.count(quarter) > bound) {
      fail(theorem::kFQuarter, fmt::format("F_{} = {} exceeds {} (p mod 8 = {})", quarter,
                                           profile.count(quarter), bound, profile.p_mod_8()));
    }
  }
  if (n % 3 == 0 && profile.count(n / 3) > 2) {
    fail(theorem::kFThird, fmt::format("F_{} = {}", n / 3, profile.count(n / 3)));
  }
  return report;
}

bool kth_residue_fixed_point(u64 p, u64 k, u64 m) {
  if (k == 0 || (p - 1) % k != 0) {
    throw std::domain_error(fmt::format("kth_residue_fixed_point: {} does not divide {}", k, p - 1));
  }
  if (m < 1 || m >= k) {
    throw std::domain_error(fmt::format("kth_residue_fixed_point: need 1 <= m < {}, got {}", k, m));
  }
  const u64 x = m * ((p - 1) / k) + 1;
  return mod_pow(x, x - 1, p) == 1;
}

}  // namespace selfpower
