#pragma once

// Fixed points of the self-power map x -> x^x (mod p).
//
// A residue x in [1, p-1] is a fixed point iff x^(x-1) == 1 (mod p), which
// holds iff x == 1 (mod ord_p x). Hence the fixed points of order d are the
// members of {1, d+1, 2d+1, ..., p-d} whose order is exactly d; the census
// below scans that progression for every divisor d of p - 1.

#include <string>
#include <utility>
#include <vector>

#include "selfpower/arith.hpp"

namespace selfpower {

using arith::Factorization;
using arith::u64;

struct OrderCount {
  u64 d;
  u64 fixed;  // F_d(p)

  friend bool operator==(const OrderCount&, const OrderCount&) = default;
};

/// Complete census of fixed points of x -> x^x mod p, split by order.
class FixedPointProfile {
 public:
  FixedPointProfile() = default;

  /// Assembles a profile from stored parts (deserialization). Validates
  /// that `counts` has one entry per divisor of pm1.n, ascending, and that
  /// pm1 factors p - 1; throws std::invalid_argument otherwise.
  FixedPointProfile(u64 p, Factorization pm1, std::vector<OrderCount> counts,
                    u64 ord2);

  u64 p() const { return p_; }
  const Factorization& pm1() const { return pm1_; }
  /// (d, F_d) for every d | p - 1, ascending in d.
  const std::vector<OrderCount>& counts() const { return counts_; }
  /// F(p), the sum of all F_d(p).
  u64 total() const { return total_; }
  /// ord_p 2; 0 when p == 2.
  u64 ord2() const { return ord2_; }
  u64 p_mod_8() const { return p_ % 8; }

  bool has_divisor(u64 d) const;
  /// F_d(p). Throws std::out_of_range if d does not divide p - 1.
  u64 count(u64 d) const;

  friend bool operator==(const FixedPointProfile&, const FixedPointProfile&) = default;

 private:
  u64 p_ = 0;
  Factorization pm1_;
  std::vector<OrderCount> counts_;
  u64 total_ = 0;
  u64 ord2_ = 0;
};

/// Every x in [1, p-1] with x^x == x (mod p), by direct evaluation.
std::vector<u64> fixed_points_bruteforce(u64 p);

/// Census by scanning, for each d | p - 1, the progression 1 + k*d.
FixedPointProfile fixed_point_profile(u64 p);
/// Same, reusing a known factorization of p - 1.
FixedPointProfile fixed_point_profile(u64 p, const Factorization& pm1);

/// x == 1 (mod ord_p x).
bool is_fixed_point_by_order(u64 x, u64 p, const Factorization& pm1);
bool is_fixed_point_by_order(u64 x, u64 p);

/// G(p) = (p-1) * sum_{n | p-1} phi(n)/n, accumulated in integers.
u64 g_count_formula(u64 p);
u64 g_count_formula(const Factorization& pm1);

inline constexpr u64 kGOracleBudget = 10'000'000;

/// Number of x in [1, (p-1)p] with p not dividing x and x^x == x (mod p),
/// by enumeration. Throws std::length_error when (p-1)p exceeds
/// kGOracleBudget.
u64 g_count_bruteforce(u64 p);

struct Violation {
  std::string theorem;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct TheoremReport {
  u64 p = 0;
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }
};

/// Theorem identifiers, in the order verify_exact_theorems checks them.
namespace theorem {
inline constexpr const char* kConsistency = "profile";
inline constexpr const char* kF1 = "F1=1";
inline constexpr const char* kF2 = "F2=0";
inline constexpr const char* kFpm1 = "F(p-1)=0";
inline constexpr const char* kFHalf = "F((p-1)/2)";
inline constexpr const char* kF3 = "F3<=1";
inline constexpr const char* kF4 = "F4<=1";
inline constexpr const char* kF6 = "F6in{0,2}";
inline constexpr const char* kFQuarter = "F((p-1)/4)";
inline constexpr const char* kFThird = "F((p-1)/3)<=2";

std::vector<std::string> all();
}  // namespace theorem

/// Checks every proven statement about F_d(p) that applies to the profile.
/// Failures are reported as data, never thrown.
TheoremReport verify_exact_theorems(const FixedPointProfile& profile);

/// Whether x = m(p-1)/k + 1 satisfies x^(x-1) == 1 (mod p). For k == 3 this
/// is the cubic-residue criterion. Throws std::domain_error unless k | p-1
/// and 1 <= m < k.
bool kth_residue_fixed_point(u64 p, u64 k, u64 m);

}  // namespace selfpower
