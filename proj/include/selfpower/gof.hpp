#pragma once

// Chi-squared goodness-of-fit tests of the fixed-point models.

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "selfpower/models.hpp"

namespace selfpower::stats {

/// One (p, d) observation: F_d(p) fixed points among phi(d) elements of
/// order d.
struct Cell {
  u64 p;
  u64 d;
  u64 phi_d;
  u64 fixed;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Orders d = 1, 2, p-1 and (p-1)/2 are fully determined and never enter a
/// binomial test. The filter can drop more.
struct OrderFilter {
  bool exclude_small_special = false;  // also drop d = 3, 4, 6
  std::vector<u64> only_orders;        // keep only these d when non-empty

  bool keeps(u64 p, u64 d) const;
  std::string describe() const;
};

/// True for d in {1, 2, p-1, (p-1)/2}.
bool is_determined_order(u64 p, u64 d);

std::vector<Cell> model_cells(std::span<const FixedPointProfile> profiles,
                              const OrderFilter& filter = {});

struct GofOptions {
  // Categories whose expected count falls below this are merged into a
  // neighbour, highest category first.
  double expected_floor = 1.0;
};

struct GofResult {
  std::vector<std::string> labels;
  std::vector<u64> observed;
  std::vector<double> expected;
  double stat = 0.0;
  unsigned dof = 0;
  double pvalue = 1.0;

  // Categories before any merging.
  std::vector<std::string> unmerged_labels;
  std::vector<u64> unmerged_observed;
  std::vector<double> unmerged_expected;

  std::size_t units = 0;        // cells or primes that contributed
  bool merged = false;          // categories were merged by the floor rule
  bool low_sample = false;      // fewer than kMinSample units
  u64 outside_support = 0;      // observations the model gives probability 0
};

inline constexpr std::size_t kMinSample = 30;

/// Pearson's statistic on pre-tallied categories, applying the
/// expected-count floor. Throws std::invalid_argument on size mismatch or
/// fewer than two categories.
GofResult chi_squared_test(std::vector<std::string> labels, std::vector<u64> observed,
                           std::vector<double> expected, const GofOptions& options = {});

/// Sums the binomial category predictions over all cells and compares them
/// with the observed category counts (0, 1, 2, >2). Throws
/// std::domain_error for an empty list or a determined order.
GofResult gof_aggregate(std::span<const Cell> cells, const GofOptions& options = {});

enum class SpecialOrder { kSmall3, kSmall4, kSmall6, kThird, kQuarter1Mod8, kQuarter5Mod8 };

std::string_view to_string(SpecialOrder which);
/// Parses "small-3", "third", "quarter-1mod8", ...; throws std::invalid_argument.
SpecialOrder parse_special_order(std::string_view name);

/// The order a special model concerns for prime p, or 0 if it does not apply.
u64 special_order_of(SpecialOrder which, u64 p);

/// Tests the corrected model for one special order over every profile it
/// applies to. Observations outside the model's support are counted in
/// outside_support and left out of the statistic.
GofResult special_order_gof(std::span<const FixedPointProfile> profiles, SpecialOrder which,
                            const GofOptions& options = {});

enum class SortKey { kOrder, kPrime, kPhiOverD };

std::string_view to_string(SortKey key);
SortKey parse_sort_key(std::string_view name);

/// Stable sort. kOrder: by d then p. kPrime: by p then d. kPhiOverD: by
/// phi(d)/d, then d, then p.
void sort_cells(std::vector<Cell>& cells, SortKey key);

struct WindowResult {
  std::size_t window_index;
  u64 max_order;  // largest d in the window
  double stat;
  unsigned dof;
  double pvalue;
};

/// gof_aggregate over cells[i, i + window) for i = 0, step, 2*step, ...
/// Throws std::domain_error if window is 0 or exceeds the cell count.
std::vector<WindowResult> sliding_window_gof(std::span<const Cell> cells, std::size_t window = 100,
                                             std::size_t step = 1, const GofOptions& options = {});

/// Copy of `cells` with each F_d redrawn from Binomial(phi_d, 1/d).
std::vector<Cell> resample_binomial(std::span<const Cell> cells, std::mt19937_64& rng);

}  // namespace selfpower::stats
