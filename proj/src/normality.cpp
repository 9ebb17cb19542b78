#include "selfpower/normality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "selfpower/distributions.hpp"

namespace selfpower::stats {

namespace {

std::vector<double> blom_scores(std::size_t n) {
  std::vector<double> scores(n);
  const double denom = static_cast<double>(n) + 0.25;
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / denom);
  }
  return scores;
}

double correlation(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw std::domain_error("correlation: constant input");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double ryan_joiner_critical_05(std::size_t n) {
  const double m = static_cast<double>(n);
  if (n <= kRyanJoinerFitMax) return 1.0063 - 0.1288 / std::sqrt(m) - 0.6118 / m + 1.3505 / (m * m);
  // Royston's Shapiro-Francia fit: log(1 - R^2) is normal with these moments.
  const double u = std::log(m);
  const double v = std::log(u);
  const double mu = -1.2725 + 1.0521 * (v - u);
  const double sigma = 1.0308 - 0.26758 * (v + 2.0 / u);
  return std::sqrt(1.0 - std::exp(mu + 1.6448536269514722 * sigma));
}

double ryan_joiner_statistic(std::span<const double> sample) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto scores = blom_scores(sorted.size());
  return correlation(sorted, scores);
}

NormalitySummary normality_suite(std::span<const double> sample, const NormalityOptions& options) {
  if (sample.size() < kMinNormalitySample) {
    throw std::domain_error(fmt::format("normality_suite: need at least {} values, got {}",
                                        kMinNormalitySample, sample.size()));
  }
  if (!(options.bin_width > 0.0) || !(options.range_hi > options.range_lo)) {
    throw std::domain_error("normality_suite: invalid histogram layout");
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw std::domain_error("normality_suite: constant sample");

  NormalitySummary s;
  s.n = sorted.size();
  const double n = static_cast<double>(s.n);
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / (n - 1.0));

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const auto bins = static_cast<std::size_t>(
      std::ceil((options.range_hi - options.range_lo) / options.bin_width - 1e-9));
  s.histogram.push_back({-kInf, options.range_lo, 0});
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = options.range_lo + static_cast<double>(b) * options.bin_width;
    s.histogram.push_back({lo, std::min(lo + options.bin_width, options.range_hi), 0});
  }
  s.histogram.push_back({options.range_hi, kInf, 0});
  for (double v : sorted) {
    std::size_t idx;
    if (v < options.range_lo) {
      idx = 0;
    } else if (v >= options.range_hi) {
      idx = bins + 1;
    } else {
      idx = 1 + std::min(bins - 1, static_cast<std::size_t>((v - options.range_lo) / options.bin_width));
    }
    ++s.histogram[idx].count;
  }

  const auto scores = blom_scores(s.n);
  s.plot.reserve(s.n);
  for (std::size_t i = 0; i < s.n; ++i) s.plot.push_back({sorted[i], scores[i]});
  s.ryan_joiner = correlation(sorted, scores);
  s.rj_critical = ryan_joiner_critical_05(s.n);
  s.rj_reject = s.ryan_joiner < s.rj_critical;
  return s;
}

NormalitySummary normality_suite(std::span<const ZRecord> records, const NormalityOptions& options) {
  std::vector<double> zs;
  zs.reserve(records.size());
  for (const auto& r : records) zs.push_back(r.z);
  return normality_suite(std::span<const double>(zs), options);
}

}  // namespace selfpower::stats
