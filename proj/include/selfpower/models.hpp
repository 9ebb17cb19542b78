#pragma once

// Random-map predictions for fixed-point counts.
//
// Under the random-map heuristic each x of order d is a fixed point with
// probability 1/d independently, so F_d(p) ~ Binomial(phi(d), 1/d) and F(p)
// has mean sum phi(d)/d and variance sum phi(d)(d-1)/d^2 over d | p-1.
// The corrected models for orders 3, 4, 6, (p-1)/3 and (p-1)/4 account for
// the dependence among the few candidates of those orders.

#include <limits>
#include <string>
#include <vector>

#include "selfpower/fixed_points.hpp"

namespace selfpower::stats {

/// A model outcome: every count in [lo, hi].
struct Category {
  std::string label;
  u64 lo;
  u64 hi;

  bool contains(u64 k) const { return lo <= k && k <= hi; }
};

inline constexpr u64 kUnbounded = std::numeric_limits<u64>::max();

struct ModelPrediction {
  std::vector<Category> categories;
  std::vector<double> probs;
  // Non-empty when an input had to be clamped to keep probabilities valid.
  std::string diagnostic;

  /// Index of the category holding k, or -1 if k is outside the support.
  int category_of(u64 k) const;
};

struct ZRecord {
  u64 p = 0;
  u64 f_total = 0;
  double mean = 0.0;
  double variance = 0.0;
  double z = 0.0;
};

/// sum_{d | p-1} phi(d)/d, evaluated as G(p)/(p-1) from the exact integer G.
double predicted_mean(const Factorization& pm1);

/// sum_{d | p-1} phi(d)(d-1)/d^2, accumulated over the common denominator
/// (p-1)^2 in 128-bit integers when p - 1 < 2^32.
double predicted_variance(const Factorization& pm1);

/// Normalizes F(p) by the predicted mean and standard deviation. Throws
/// std::domain_error when the predicted variance is zero (p = 2).
ZRecord z_statistic(const FixedPointProfile& profile);

/// Binomial(phi_d, 1/d) probabilities of the categories 0, 1, 2, >2.
/// Computed in log space; >2 is the complement. Throws std::domain_error
/// for d < 3 or phi_d == 0.
ModelPrediction binomial_category_probs(u64 d, u64 phi_d);

/// Corrected model for orders 3, 4 and 6:
///   3 -> {0: 1/3, 1: 2/3}, 4 -> {0: 1/2, 1: 1/2}, 6 -> {0: 5/6, 2: 1/6}.
ModelPrediction small_order_prediction(u64 d);

/// Two candidates of order (p-1)/3, each of that order with probability
/// q = phi((p-1)/3)/(p-1): probabilities (1-q)^2, 2q(1-q), q^2.
ModelPrediction large_order_third_prediction(const Factorization& pm1);

/// Order (p-1)/4 with q = phi((p-1)/4)/(p-1) and r = 3 phi((p-1)/4)/((p-1)/2).
/// p = 1 mod 8: over {0,1,2}, ((1-q)(1-r), q(1-r) + (1-q)r, qr).
/// p = 5 mod 8: over {0,1}, (1-q, q).
/// r is clamped to 1 (with a diagnostic) for tiny degenerate p.
ModelPrediction large_order_quarter_prediction(const Factorization& pm1);

}  // namespace selfpower::stats
