#include "selfpower/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "selfpower/arith.hpp"

namespace selfpower::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using stats::GofResult;

Range preset_range(std::string_view name) {
  if (name == "six-digit") return {100003, 102667};
  if (name == "seven-digit") return {1000003, 1007977};
  throw InputError(fmt::format("unknown preset '{}' (expected six-digit or seven-digit)", name));
}

std::vector<FixedPointProfile> compute_profiles(u64 lo, u64 hi, unsigned workers) {
  const auto primes = arith::primes_in_range(lo, hi);
  std::vector<FixedPointProfile> out(primes.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < primes.size(); i = next++) {
      out[i] = fixed_point_profile(primes[i]);
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(primes.size())));
  if (workers <= 1) {
    work();
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  return (pool.clear(), out);
}

std::string encode_profile(const FixedPointProfile& profile) {
  json factors = json::array();
  for (const auto& [prime, exponent] : profile.pm1().factors) factors.push_back({prime, exponent});
  json counts = json::array();
  for (const auto& [d, fixed] : profile.counts()) counts.push_back({d, fixed});
  json record;
  record["p"] = profile.p();
  record["factors"] = std::move(factors);
  record["counts"] = std::move(counts);
  record["ord2"] = profile.ord2();
  record["pmod8"] = profile.p_mod_8();
  return record.dump();
}

namespace {

json parse_line(std::string_view line) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("invalid JSON ({})", e.what()));
  }
}

u64 as_u64(const json& v, std::string_view field) {
  if (!v.is_number_unsigned()) throw InputError(fmt::format("field '{}' must be a non-negative integer", field));
  return v.get<u64>();
}

const json& require(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw InputError(fmt::format("missing field '{}'", field));
  return *it;
}

std::vector<std::pair<u64, u64>> pair_list(const json& v, std::string_view field) {
  if (!v.is_array()) throw InputError(fmt::format("field '{}' must be a list", field));
  std::vector<std::pair<u64, u64>> out;
  for (const auto& item : v) {
    if (!item.is_array() || item.size() != 2) {
      throw InputError(fmt::format("field '{}' must hold [a, b] pairs", field));
    }
    out.emplace_back(as_u64(item[0], field), as_u64(item[1], field));
  }
  return out;
}

FixedPointProfile profile_from_json(const json& record) {
  if (!record.is_object()) throw InputError("record is not a JSON object");
  const u64 p = as_u64(require(record, "p"), "p");
  Factorization pm1;
  pm1.n = p > 0 ? p - 1 : 0;
  for (auto [prime, exponent] : pair_list(require(record, "factors"), "factors")) {
    pm1.factors.push_back({prime, static_cast<unsigned>(exponent)});
  }
  std::vector<OrderCount> counts;
  for (auto [d, fixed] : pair_list(require(record, "counts"), "counts")) counts.push_back({d, fixed});
  const u64 ord2 = as_u64(require(record, "ord2"), "ord2");
  const u64 pmod8 = as_u64(require(record, "pmod8"), "pmod8");
  if (pmod8 != p % 8) throw InputError(fmt::format("pmod8 = {} but p mod 8 = {}", pmod8, p % 8));
  try {
    return FixedPointProfile(p, std::move(pm1), std::move(counts), ord2);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

std::ofstream open_report(const AnalyzeOptions& options, std::string_view name) {
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw InputError(fmt::format("cannot create '{}': {}", options.out_dir.string(), ec.message()));
  return open_output(options.out_dir / name);
}

void write_header(const std::vector<FixedPointProfile>& profiles, const AnalyzeOptions& options,
                  std::ostream& log) {
  if (!options.inputs.empty()) {
    fmt::print(log, "input: {}\n", fmt::join(options.inputs, ", "));
  }
  if (profiles.empty()) {
    fmt::print(log, "profiles: 0\n");
    return;
  }
  fmt::print(log, "profiles: {} primes, p in [{}, {}]\n", profiles.size(), profiles.front().p(),
             profiles.back().p());
}

std::string format_counts(const std::vector<std::string>& labels, const std::vector<u64>& observed,
                          const std::vector<double>& expected) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += fmt::format("  {:>6}  observed {:>6}  expected {:>10.4f}\n", labels[i], observed[i], expected[i]);
  }
  return out;
}

void print_gof(const GofResult& r, std::ostream& log) {
  log << format_counts(r.labels, r.observed, r.expected);
  fmt::print(log, "  chi2 = {}  dof = {}  p-value = {}\n", fmt_real(r.stat), r.dof, fmt_pvalue(r.pvalue));
  if (r.merged) {
    fmt::print(log, "  note: categories merged (expected-count floor); dof reduced\n");
  }
  if (r.low_sample) fmt::print(log, "  note: low sample ({} units)\n", r.units);
  if (r.outside_support > 0) {
    fmt::print(log, "  note: {} observations outside the model's support\n", r.outside_support);
  }
}

// Observed/expected for a fixed 0, 1, 2 layout; missing outcomes are blank.
std::string outcome_columns(const GofResult& r) {
  std::string obs, exp;
  for (const char* label : {"0", "1", "2"}) {
    auto it = std::find(r.unmerged_labels.begin(), r.unmerged_labels.end(), label);
    if (it == r.unmerged_labels.end()) {
      obs += ",0";
      exp += ",0";
      continue;
    }
    const auto i = static_cast<std::size_t>(it - r.unmerged_labels.begin());
    obs += fmt::format(",{}", r.unmerged_observed[i]);
    exp += "," + fmt_real(r.unmerged_expected[i]);
  }
  return obs + exp;
}

}  // namespace

FixedPointProfile decode_profile(std::string_view line) { return profile_from_json(parse_line(line)); }

void write_profiles(std::ostream& out, const std::vector<FixedPointProfile>& profiles, Range range) {
  json header;
  header["format"] = kFormatTag;
  header["version"] = 1;
  header["from"] = range.lo;
  header["to"] = range.hi;
  out << header.dump() << '\n';
  for (const auto& profile : profiles) out << encode_profile(profile) << '\n';
}

std::vector<FixedPointProfile> read_profiles(std::istream& in, std::string_view name) {
  std::vector<FixedPointProfile> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json record = parse_line(line);
      if (record.is_object() && record.contains("format")) {
        if (record["format"] != kFormatTag) throw InputError("unrecognized format header");
        continue;
      }
      out.push_back(profile_from_json(record));
    } catch (const InputError& e) {
      throw InputError(fmt::format("{}:{}: {}", name, line_no, e.what()));
    }
  }
  return out;
}

std::vector<FixedPointProfile> read_profiles(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read '{}'", path.string()));
  return read_profiles(in, path.string());
}

std::size_t sweep(const SweepConfig& config) {
  if (config.lo < 2 || config.lo > config.hi) {
    throw InputError(fmt::format("invalid range [{}, {}]: need 2 <= from <= to", config.lo, config.hi));
  }
  if (config.workers == 0) throw InputError("workers must be >= 1");
  if (config.format != "jsonl") throw InputError(fmt::format("unsupported format '{}'", config.format));
  // Open before computing so an unwritable path fails fast.
  std::ofstream out = open_output(config.out);
  const auto profiles = compute_profiles(config.lo, config.hi, config.workers);
  write_profiles(out, profiles, {config.lo, config.hi});
  out.flush();
  if (!out) throw InputError(fmt::format("error writing '{}'", config.out.string()));
  return profiles.size();
}

std::string fmt_real(double v) { return fmt::format("{:.6g}", v); }
std::string fmt_pvalue(double v) { return fmt::format("{:.4f}", v); }

stats::NormalitySummary analyze_normality(const std::vector<FixedPointProfile>& profiles,
                                          const AnalyzeOptions& options, std::ostream& log) {
  if (profiles.empty()) throw InputError("normality: input holds no profiles");
  std::vector<stats::ZRecord> zs;
  zs.reserve(profiles.size());
  for (const auto& profile : profiles) {
    if (profile.p() <= 3) continue;
    zs.push_back(stats::z_statistic(profile));
  }
  if (zs.size() < stats::kMinNormalitySample) {
    throw InputError(fmt::format("normality: need at least {} primes above 3, got {}",
                                 stats::kMinNormalitySample, zs.size()));
  }
  const auto summary = stats::normality_suite(std::span<const stats::ZRecord>(zs), options.normality);

  {
    auto out = open_report(options, "zrecords.csv");
    out << "p,f_total,mean,variance,z\n";
    for (const auto& z : zs) {
      out << fmt::format("{},{},{},{},{}\n", z.p, z.f_total, fmt_real(z.mean), fmt_real(z.variance),
                         fmt_real(z.z));
    }
  }
  {
    auto out = open_report(options, "histogram.csv");
    out << "bin_lo,bin_hi,count\n";
    for (const auto& b : summary.histogram) {
      out << fmt::format("{},{},{}\n", fmt_real(b.lo), fmt_real(b.hi), b.count);
    }
  }
  {
    auto out = open_report(options, "probplot.csv");
    out << "z,normal_score\n";
    for (const auto& pt : summary.plot) out << fmt::format("{},{}\n", fmt_real(pt.z), fmt_real(pt.normal_score));
  }

  write_header(profiles, options, log);
  fmt::print(log, "normality of z-statistics (n = {})\n", summary.n);
  fmt::print(log, "  mean = {}  sd = {}\n", fmt_real(summary.mean), fmt_real(summary.sd));
  fmt::print(log, "  Ryan-Joiner R = {}  critical(0.05) = {}  -> {}\n", fmt_real(summary.ryan_joiner),
             fmt_real(summary.rj_critical), summary.rj_reject ? "reject normality" : "consistent with normality");
  return summary;
}

GofResult analyze_gof(const std::vector<FixedPointProfile>& profiles, const AnalyzeOptions& options,
                      std::ostream& log) {
  const auto cells = stats::model_cells(profiles, options.filter);
  if (cells.empty()) throw InputError("gof: no (p, d) cells after exclusions");
  const auto r = stats::gof_aggregate(cells, options.gof);
  {
    auto out = open_report(options, "gof.csv");
    out << "category,observed,expected\n";
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
      out << fmt::format("{},{},{}\n", r.labels[i], r.observed[i], fmt_real(r.expected[i]));
    }
  }
  write_header(profiles, options, log);
  fmt::print(log, "binomial goodness of fit over {} cells ({})\n", r.units, options.filter.describe());
  fmt::print(log, "  category policy: 0, 1, 2, >2; merge while expected < {}\n", options.gof.expected_floor);
  print_gof(r, log);
  return r;
}

std::vector<stats::WindowResult> analyze_window(const std::vector<FixedPointProfile>& profiles,
                                                const AnalyzeOptions& options, std::ostream& log) {
  auto cells = stats::model_cells(profiles, options.filter);
  if (cells.size() < options.window) {
    throw InputError(fmt::format("window: {} cells is fewer than the window {}", cells.size(), options.window));
  }
  stats::sort_cells(cells, options.sort_key);
  const auto windows = stats::sliding_window_gof(cells, options.window, options.step, options.gof);
  {
    auto out = open_report(options, "window.csv");
    out << "window_index,max_order,log10_max_order,stat,dof,pvalue\n";
    for (const auto& w : windows) {
      out << fmt::format("{},{},{},{},{},{}\n", w.window_index, w.max_order,
                         fmt_real(std::log10(static_cast<double>(w.max_order))), fmt_real(w.stat), w.dof,
                         fmt_pvalue(w.pvalue));
    }
  }
  write_header(profiles, options, log);
  const auto below = std::count_if(windows.begin(), windows.end(), [](const auto& w) { return w.pvalue < 0.05; });
  fmt::print(log, "sliding-window goodness of fit: sort key = {}, window = {}, step = {}\n",
             stats::to_string(options.sort_key), options.window, options.step);
  fmt::print(log, "  {} cells ({}), {} windows, {} with p-value < 0.05\n", cells.size(),
             options.filter.describe(), windows.size(), below);
  return windows;
}

std::vector<GofResult> analyze_small_orders(const std::vector<FixedPointProfile>& profiles,
                                            const AnalyzeOptions& options, std::ostream& log) {
  using stats::SpecialOrder;
  std::vector<GofResult> results;
  auto out = open_report(options, "small_orders.csv");
  out << "d,primes,f0,f1,f2,expected0,expected1,expected2,outside_support,stat,dof,pvalue\n";
  write_header(profiles, options, log);
  for (auto [which, d] : {std::pair{SpecialOrder::kSmall3, 3}, {SpecialOrder::kSmall4, 4}, {SpecialOrder::kSmall6, 6}}) {
    const auto r = stats::special_order_gof(profiles, which, options.gof);
    out << fmt::format("{},{}{},{},{},{},{}\n", d, r.units, outcome_columns(r), r.outside_support, fmt_real(r.stat),
                       r.dof, fmt_pvalue(r.pvalue));
    fmt::print(log, "order {}: {} primes with {} | p-1\n", d, r.units, d);
    print_gof(r, log);
    results.push_back(r);
  }
  return results;
}

std::vector<GofResult> analyze_large_orders(const std::vector<FixedPointProfile>& profiles,
                                            const AnalyzeOptions& options, std::ostream& log) {
  using stats::SpecialOrder;
  std::vector<GofResult> results;
  auto out = open_report(options, "large_orders.csv");
  out << "variant,primes,f0,f1,f2,expected0,expected1,expected2,outside_support,stat,dof,pvalue\n";
  write_header(profiles, options, log);
  for (auto which : {SpecialOrder::kThird, SpecialOrder::kQuarter1Mod8, SpecialOrder::kQuarter5Mod8}) {
    const auto r = stats::special_order_gof(profiles, which, options.gof);
    out << fmt::format("{},{}{},{},{},{},{}\n", stats::to_string(which), r.units, outcome_columns(r),
                       r.outside_support, fmt_real(r.stat), r.dof, fmt_pvalue(r.pvalue));
    fmt::print(log, "{}: {} primes\n", stats::to_string(which), r.units);
    print_gof(r, log);
    results.push_back(r);
  }
  return results;
}

int verify(const std::vector<FixedPointProfile>& profiles, std::ostream& log) {
  std::map<std::string, std::size_t> per_theorem;
  for (const auto& id : theorem::all()) per_theorem[id] = 0;
  std::vector<std::pair<u64, Violation>> offenders;
  for (const auto& profile : profiles) {
    for (auto& v : verify_exact_theorems(profile).violations) {
      ++per_theorem[v.theorem];
      offenders.emplace_back(profile.p(), std::move(v));
    }
  }
  if (profiles.empty()) {
    fmt::print(log, "0 profiles\n");
    return 0;
  }
  fmt::print(log, "{} profiles checked\n", profiles.size());
  for (const auto& id : theorem::all()) fmt::print(log, "  {:<16} {} violations\n", id, per_theorem[id]);
  for (const auto& [p, v] : offenders) fmt::print(log, "VIOLATION p={} {}: {}\n", p, v.theorem, v.detail);
  return offenders.empty() ? 0 : 1;
}

int oracle_check(u64 max_p, std::ostream& log) {
  if (max_p > kOracleMaxP) {
    throw InputError(fmt::format("oracle-check: max-p {} exceeds the budget {}", max_p, kOracleMaxP));
  }
  std::size_t census_checked = 0, g_checked = 0;
  for (u64 p : arith::primes_in_range(2, max_p)) {
    const auto pm1 = arith::factorize(p - 1);
    const auto brute = fixed_points_bruteforce(p);
    const auto profile = fixed_point_profile(p, pm1);
    std::map<u64, u64> by_order;
    for (u64 x : brute) ++by_order[arith::multiplicative_order(x, p, pm1)];
    for (const auto& [d, fixed] : profile.counts()) {
      const u64 expected = by_order.count(d) ? by_order[d] : 0;
      if (fixed != expected) {
        fmt::print(log, "MISMATCH p={}: F_{} = {} by census, {} by brute force\n", p, d, fixed, expected);
        return 1;
      }
    }
    if (profile.total() != brute.size()) {
      fmt::print(log, "MISMATCH p={}: F(p) = {} by census, {} by brute force\n", p, profile.total(), brute.size());
      return 1;
    }
    for (u64 x = 1; x < p; ++x) {
      const bool listed = std::binary_search(brute.begin(), brute.end(), x);
      if (is_fixed_point_by_order(x, p, pm1) != listed) {
        fmt::print(log, "MISMATCH p={}: order criterion disagrees at x = {}\n", p, x);
        return 1;
      }
    }
    ++census_checked;
    if (p - 1 <= kGOracleBudget / p) {
      const u64 formula = g_count_formula(pm1);
      const u64 brute_g = g_count_bruteforce(p);
      if (formula != brute_g) {
        fmt::print(log, "MISMATCH p={}: G(p) = {} by formula, {} by enumeration\n", p, formula, brute_g);
        return 1;
      }
      ++g_checked;
    }
  }
  fmt::print(log, "{} primes checked\n", census_checked);
  fmt::print(log, "{} G(p) identities checked\n", g_checked);
  return 0;
}

}  // namespace selfpower::pipeline
