#include "selfpower/models.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace selfpower::stats {

using arith::divisor_factorizations;
using arith::euler_phi;

int ModelPrediction::category_of(u64 k) const {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (categories[i].contains(k)) return static_cast<int>(i);
  }
  return -1;
}

double predicted_mean(const Factorization& pm1) {
  return static_cast<double>(static_cast<long double>(g_count_formula(pm1)) /
                             static_cast<long double>(pm1.n));
}

double predicted_variance(const Factorization& pm1) {
  const u64 n = pm1.n;
  if (n < (u64{1} << 32)) {
    unsigned __int128 numerator = 0;
    for (const Factorization& fd : divisor_factorizations(pm1)) {
      const u64 d = fd.n;
      const u64 cofactor = n / d;
      numerator += static_cast<unsigned __int128>(euler_phi(fd) * (d - 1)) * cofactor * cofactor;
    }
    const unsigned __int128 denominator = static_cast<unsigned __int128>(n) * n;
    return static_cast<double>(static_cast<long double>(numerator) /
                               static_cast<long double>(denominator));
  }
  long double sum = 0.0L;
  for (const Factorization& fd : divisor_factorizations(pm1)) {
    const long double d = static_cast<long double>(fd.n);
    sum += static_cast<long double>(euler_phi(fd)) * (d - 1) / (d * d);
  }
  return static_cast<double>(sum);
}

ZRecord z_statistic(const FixedPointProfile& profile) {
  ZRecord z;
  z.p = profile.p();
  z.f_total = profile.total();
  z.mean = predicted_mean(profile.pm1());
  z.variance = predicted_variance(profile.pm1());
  if (!(z.variance > 0.0)) {
    throw std::domain_error(fmt::format("z_statistic: zero predicted variance for p = {}", z.p));
  }
  z.z = (static_cast<double>(z.f_total) - z.mean) / std::sqrt(z.variance);
  return z;
}

ModelPrediction binomial_category_probs(u64 d, u64 phi_d) {
  if (d < 3) throw std::domain_error(fmt::format("binomial_category_probs: order {} < 3", d));
  if (phi_d == 0) throw std::domain_error("binomial_category_probs: phi_d must be positive");

  const double trials = static_cast<double>(phi_d);
  const double log_q = std::log1p(-1.0 / static_cast<double>(d));  // log((d-1)/d)
  const double log_p = -std::log(static_cast<double>(d));
  auto pmf = [&](u64 k) {
    if (k > phi_d) return 0.0;
    const double kk = static_cast<double>(k);
    const double log_choose =
        std::lgamma(trials + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(trials - kk + 1.0);
    return std::exp(log_choose + kk * log_p + (trials - kk) * log_q);
  };

  ModelPrediction pred;
  pred.categories = {{"0", 0, 0}, {"1", 1, 1}, {"2", 2, 2}, {">2", 3, kUnbounded}};
  const double p0 = pmf(0), p1 = pmf(1), p2 = pmf(2);
  const double rest = 1.0 - (p0 + p1 + p2);
  pred.probs = {p0, p1, p2, rest > 0.0 ? rest : 0.0};
  return pred;
}

ModelPrediction small_order_prediction(u64 d) {
  ModelPrediction pred;
  switch (d) {
    case 3:
      pred.categories = {{"0", 0, 0}, {"1", 1, 1}};
      pred.probs = {1.0 / 3.0, 2.0 / 3.0};
      break;
    case 4:
      pred.categories = {{"0", 0, 0}, {"1", 1, 1}};
      pred.probs = {0.5, 0.5};
      break;
    case 6:
      pred.categories = {{"0", 0, 0}, {"2", 2, 2}};
      pred.probs = {5.0 / 6.0, 1.0 / 6.0};
      break;
    default:
      throw std::domain_error(fmt::format("small_order_prediction: order {} not in {{3, 4, 6}}", d));
  }
  return pred;
}

namespace {

u64 phi_of_divisor(const Factorization& pm1, u64 d) {
  for (const Factorization& fd : divisor_factorizations(pm1)) {
    if (fd.n == d) return euler_phi(fd);
  }
  throw std::logic_error("phi_of_divisor: not a divisor");
}

}  // namespace

ModelPrediction large_order_third_prediction(const Factorization& pm1) {
  if (pm1.n % 3 != 0) {
    throw std::domain_error(fmt::format("large_order_third_prediction: 3 does not divide {}", pm1.n));
  }
  const double q = static_cast<double>(phi_of_divisor(pm1, pm1.n / 3)) / static_cast<double>(pm1.n);
  ModelPrediction pred;
  pred.categories = {{"0", 0, 0}, {"1", 1, 1}, {"2", 2, 2}};
  pred.probs = {(1 - q) * (1 - q), 2 * q * (1 - q), q * q};
  return pred;
}

ModelPrediction large_order_quarter_prediction(const Factorization& pm1) {
  const u64 n = pm1.n;
  if (n % 4 != 0) {
    throw std::domain_error(fmt::format("large_order_quarter_prediction: 4 does not divide {}", n));
  }
  const double phi = static_cast<double>(phi_of_divisor(pm1, n / 4));
  const double q = phi / static_cast<double>(n);
  ModelPrediction pred;
  if (n % 8 == 0) {  // p = 1 mod 8
    double r = 3.0 * phi / (static_cast<double>(n) / 2.0);
    if (r > 1.0) {
      pred.diagnostic = fmt::format("r = {:.6g} clamped to 1 for p = {}", r, n + 1);
      r = 1.0;
    }
    pred.categories = {{"0", 0, 0}, {"1", 1, 1}, {"2", 2, 2}};
    pred.probs = {(1 - q) * (1 - r), q * (1 - r) + (1 - q) * r, q * r};
  } else {  // p = 5 mod 8
    pred.categories = {{"0", 0, 0}, {"1", 1, 1}};
    pred.probs = {1 - q, q};
  }
  return pred;
}

}  // namespace selfpower::stats
