#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "selfpower/models.hpp"

namespace selfpower::stats {

struct HistogramBin {
  double lo;  // -inf for the underflow bin
  double hi;  // +inf for the overflow bin
  std::size_t count;
};

struct NormalityOptions {
  double bin_width = 0.25;
  double range_lo = -4.0;
  double range_hi = 4.0;
};

struct ProbabilityPoint {
  double z;             // i-th smallest observation
  double normal_score;  // Phi^-1((i - 3/8) / (n + 1/4))
};

struct NormalitySummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
  std::vector<HistogramBin> histogram;
  std::vector<ProbabilityPoint> plot;
  double ryan_joiner = 0.0;
  double rj_critical = 0.0;  // 0.05-level critical value
  bool rj_reject = false;
};

inline constexpr std::size_t kMinNormalitySample = 30;

inline constexpr std::size_t kRyanJoinerFitMax = 100;

/// Approximate 0.05-level critical value of the Ryan-Joiner correlation.
/// Up to kRyanJoinerFitMax: 1.0063 - 0.1288/sqrt(n) - 0.6118/n + 1.3505/n^2.
/// That polynomial exceeds 1 once n passes ~420, so larger samples use
/// Royston's approximation for the Shapiro-Francia statistic R^2.
double ryan_joiner_critical_05(std::size_t n);

/// Pearson correlation of the sorted sample with Blom normal scores.
double ryan_joiner_statistic(std::span<const double> sample);

/// Summary statistics, histogram, probability plot and Ryan-Joiner test.
/// Throws std::domain_error for fewer than 30 values or a constant sample.
NormalitySummary normality_suite(std::span<const double> sample, const NormalityOptions& options = {});
NormalitySummary normality_suite(std::span<const ZRecord> records, const NormalityOptions& options = {});

}  // namespace selfpower::stats
