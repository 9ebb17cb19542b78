#include "selfpower/gof.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "selfpower/distributions.hpp"

namespace selfpower::stats {

using arith::divisor_factorizations;
using arith::euler_phi;

bool is_determined_order(u64 p, u64 d) {
  const u64 n = p - 1;
  return d == 1 || d == 2 || d == n || (n % 2 == 0 && d == n / 2);
}

bool OrderFilter::keeps(u64 p, u64 d) const {
  if (is_determined_order(p, d)) return false;
  if (exclude_small_special && (d == 3 || d == 4 || d == 6)) return false;
  if (!only_orders.empty() &&
      std::find(only_orders.begin(), only_orders.end(), d) == only_orders.end()) {
    return false;
  }
  return true;
}

std::string OrderFilter::describe() const {
  std::string out = "excluded orders: 1, 2, p-1, (p-1)/2";
  if (exclude_small_special) out += ", 3, 4, 6";
  if (!only_orders.empty()) out += fmt::format("; restricted to d in {{{}}}", fmt::join(only_orders, ", "));
  return out;
}

std::vector<Cell> model_cells(std::span<const FixedPointProfile> profiles, const OrderFilter& filter) {
  std::vector<Cell> cells;
  for (const auto& profile : profiles) {
    for (const Factorization& fd : divisor_factorizations(profile.pm1())) {
      if (!filter.keeps(profile.p(), fd.n)) continue;
      cells.push_back({profile.p(), fd.n, euler_phi(fd), profile.count(fd.n)});
    }
  }
  return cells;
}

GofResult chi_squared_test(std::vector<std::string> labels, std::vector<u64> observed,
                           std::vector<double> expected, const GofOptions& options) {
  if (labels.size() != observed.size() || labels.size() != expected.size()) {
    throw std::invalid_argument("chi_squared_test: category vectors differ in length");
  }
  if (labels.size() < 2) throw std::invalid_argument("chi_squared_test: need two categories");

  GofResult r;
  r.unmerged_labels = labels;
  r.unmerged_observed = observed;
  r.unmerged_expected = expected;

  auto merge = [&](std::size_t keep, std::size_t drop) {
    const std::size_t lo = std::min(keep, drop);
    labels[lo] = labels[std::min(keep, drop)] + "|" + labels[std::max(keep, drop)];
    observed[lo] = observed[keep] + observed[drop];
    expected[lo] = expected[keep] + expected[drop];
    const std::size_t hi = std::max(keep, drop);
    labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(hi));
    observed.erase(observed.begin() + static_cast<std::ptrdiff_t>(hi));
    expected.erase(expected.begin() + static_cast<std::ptrdiff_t>(hi));
    r.merged = true;
  };
  while (labels.size() > 2) {
    std::size_t k = labels.size();
    std::size_t victim = k;
    for (std::size_t i = k; i-- > 0;) {
      if (expected[i] < options.expected_floor) {
        victim = i;
        break;
      }
    }
    if (victim == k) break;
    if (victim == k - 1) {
      merge(victim - 1, victim);
    } else if (victim == 0) {
      merge(1, 0);
    } else {
      merge(expected[victim - 1] <= expected[victim + 1] ? victim - 1 : victim + 1, victim);
    }
  }

  double stat = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double o = static_cast<double>(observed[i]);
    if (expected[i] > 0.0) {
      stat += (o - expected[i]) * (o - expected[i]) / expected[i];
    } else if (observed[i] > 0) {
      stat = std::numeric_limits<double>::infinity();
    }
  }
  r.labels = std::move(labels);
  r.observed = std::move(observed);
  r.expected = std::move(expected);
  r.stat = stat;
  r.dof = static_cast<unsigned>(r.labels.size() - 1);
  r.pvalue = chi_squared_sf(stat, r.dof);
  return r;
}

namespace {

using CategoryProbs = std::array<double, 4>;

constexpr int binomial_category(u64 fixed) { return fixed > 2 ? 3 : static_cast<int>(fixed); }

CategoryProbs cell_probs(const Cell& cell) {
  if (is_determined_order(cell.p, cell.d)) {
    throw std::domain_error(
        fmt::format("gof_aggregate: order {} is determined for p = {}", cell.d, cell.p));
  }
  const auto pred = binomial_category_probs(cell.d, cell.phi_d);
  return {pred.probs[0], pred.probs[1], pred.probs[2], pred.probs[3]};
}

GofResult aggregate(std::span<const Cell> cells, std::span<const CategoryProbs> probs,
                    const GofOptions& options) {
  std::vector<u64> observed(4, 0);
  std::vector<double> expected(4, 0.0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    ++observed[binomial_category(cells[i].fixed)];
    for (std::size_t c = 0; c < 4; ++c) expected[c] += probs[i][c];
  }
  GofResult r = chi_squared_test({"0", "1", "2", ">2"}, std::move(observed), std::move(expected), options);
  r.units = cells.size();
  r.low_sample = cells.size() < kMinSample;
  return r;
}

}  // namespace

GofResult gof_aggregate(std::span<const Cell> cells, const GofOptions& options) {
  if (cells.empty()) throw std::domain_error("gof_aggregate: no cells");
  std::vector<CategoryProbs> probs;
  probs.reserve(cells.size());
  for (const auto& cell : cells) probs.push_back(cell_probs(cell));
  return aggregate(cells, probs, options);
}

std::string_view to_string(SpecialOrder which) {
  switch (which) {
    case SpecialOrder::kSmall3: return "small-3";
    case SpecialOrder::kSmall4: return "small-4";
    case SpecialOrder::kSmall6: return "small-6";
    case SpecialOrder::kThird: return "third";
    case SpecialOrder::kQuarter1Mod8: return "quarter-1mod8";
    case SpecialOrder::kQuarter5Mod8: return "quarter-5mod8";
  }
  return "?";
}

SpecialOrder parse_special_order(std::string_view name) {
  for (auto which : {SpecialOrder::kSmall3, SpecialOrder::kSmall4, SpecialOrder::kSmall6,
                     SpecialOrder::kThird, SpecialOrder::kQuarter1Mod8, SpecialOrder::kQuarter5Mod8}) {
    if (to_string(which) == name) return which;
  }
  throw std::invalid_argument(fmt::format("unknown special order '{}'", name));
}

u64 special_order_of(SpecialOrder which, u64 p) {
  const u64 n = p - 1;
  switch (which) {
    case SpecialOrder::kSmall3: return n % 3 == 0 ? 3 : 0;
    case SpecialOrder::kSmall4: return n % 4 == 0 ? 4 : 0;
    case SpecialOrder::kSmall6: return n % 6 == 0 ? 6 : 0;
    case SpecialOrder::kThird: return n % 3 == 0 ? n / 3 : 0;
    case SpecialOrder::kQuarter1Mod8: return p % 8 == 1 ? n / 4 : 0;
    case SpecialOrder::kQuarter5Mod8: return p % 8 == 5 ? n / 4 : 0;
  }
  return 0;
}

GofResult special_order_gof(std::span<const FixedPointProfile> profiles, SpecialOrder which,
                            const GofOptions& options) {
  std::vector<std::string> labels;
  std::vector<u64> observed;
  std::vector<double> expected;
  std::size_t units = 0;
  u64 outside = 0;
  for (const auto& profile : profiles) {
    const u64 d = special_order_of(which, profile.p());
    if (d == 0) continue;
    ModelPrediction pred;
    switch (which) {
      case SpecialOrder::kSmall3:
      case SpecialOrder::kSmall4:
      case SpecialOrder::kSmall6: pred = small_order_prediction(d); break;
      case SpecialOrder::kThird: pred = large_order_third_prediction(profile.pm1()); break;
      case SpecialOrder::kQuarter1Mod8:
      case SpecialOrder::kQuarter5Mod8: pred = large_order_quarter_prediction(profile.pm1()); break;
    }
    if (labels.empty()) {
      for (const auto& c : pred.categories) labels.push_back(c.label);
      observed.assign(labels.size(), 0);
      expected.assign(labels.size(), 0.0);
    }
    ++units;
    for (std::size_t c = 0; c < pred.probs.size(); ++c) expected[c] += pred.probs[c];
    const int c = pred.category_of(profile.count(d));
    if (c < 0) {
      ++outside;
    } else {
      ++observed[static_cast<std::size_t>(c)];
    }
  }
  if (units == 0) {
    throw std::domain_error(fmt::format("special_order_gof: no primes qualify for {}", to_string(which)));
  }
  GofResult r = chi_squared_test(std::move(labels), std::move(observed), std::move(expected), options);
  r.units = units;
  r.low_sample = units < kMinSample;
  r.outside_support = outside;
  return r;
}

std::string_view to_string(SortKey key) {
  switch (key) {
    case SortKey::kOrder: return "order";
    case SortKey::kPrime: return "prime";
    case SortKey::kPhiOverD: return "phi-over-d";
  }
  return "?";
}

SortKey parse_sort_key(std::string_view name) {
  for (auto key : {SortKey::kOrder, SortKey::kPrime, SortKey::kPhiOverD}) {
    if (to_string(key) == name) return key;
  }
  throw std::invalid_argument(fmt::format("unknown sort key '{}'", name));
}

void sort_cells(std::vector<Cell>& cells, SortKey key) {
  switch (key) {
    case SortKey::kOrder:
      std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return a.d != b.d ? a.d < b.d : a.p < b.p;
      });
      break;
    case SortKey::kPrime:
      std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return a.p != b.p ? a.p < b.p : a.d < b.d;
      });
      break;
    case SortKey::kPhiOverD:
      // phi(a)/a < phi(b)/b compared exactly as phi(a)*b < phi(b)*a.
      std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        const auto lhs = static_cast<unsigned __int128>(a.phi_d) * b.d;
        const auto rhs = static_cast<unsigned __int128>(b.phi_d) * a.d;
        if (lhs != rhs) return lhs < rhs;
        return a.d != b.d ? a.d < b.d : a.p < b.p;
      });
      break;
  }
}

std::vector<WindowResult> sliding_window_gof(std::span<const Cell> cells, std::size_t window,
                                             std::size_t step, const GofOptions& options) {
  if (window == 0 || window > cells.size()) {
    throw std::domain_error(
        fmt::format("sliding_window_gof: window {} invalid for {} cells", window, cells.size()));
  }
  if (step == 0) throw std::domain_error("sliding_window_gof: step must be positive");
  std::vector<CategoryProbs> probs;
  probs.reserve(cells.size());
  for (const auto& cell : cells) probs.push_back(cell_probs(cell));

  std::vector<WindowResult> out;
  std::size_t index = 0;
  for (std::size_t start = 0; start + window <= cells.size(); start += step, ++index) {
    const auto slice = cells.subspan(start, window);
    const GofResult r = aggregate(slice, std::span(probs).subspan(start, window), options);
    u64 max_order = 0;
    for (const auto& c : slice) max_order = std::max(max_order, c.d);
    out.push_back({index, max_order, r.stat, r.dof, r.pvalue});
  }
  return out;
}

std::vector<Cell> resample_binomial(std::span<const Cell> cells, std::mt19937_64& rng) {
  std::vector<Cell> out(cells.begin(), cells.end());
  for (auto& cell : out) {
    std::binomial_distribution<u64> draw(cell.phi_d, 1.0 / static_cast<double>(cell.d));
    cell.fixed = draw(rng);
  }
  return out;
}

}  // namespace selfpower::stats
