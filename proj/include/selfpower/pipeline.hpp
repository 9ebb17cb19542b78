#pragma once

// Sweep orchestration, profile persistence and report emission.
//
// Profile files are UTF-8 JSON Lines. The first line is a header object
// carrying a "format" key; every following line is one profile:
//   {"p":7,"factors":[[2,1],[3,1]],"counts":[[1,1],[2,0],[3,1],[6,0]],"ord2":3,"pmod8":7}

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "selfpower/fixed_points.hpp"
#include "selfpower/gof.hpp"
#include "selfpower/normality.hpp"

namespace selfpower::pipeline {

/// Bad user input or unreadable/unwritable files; the CLI maps it to exit 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kFormatTag = "selfpower-profiles";

struct Range {
  u64 lo;
  u64 hi;
};

/// "six-digit" -> [100003, 102667], "seven-digit" -> [1000003, 1007977].
Range preset_range(std::string_view name);

struct SweepConfig {
  u64 lo = 2;
  u64 hi = 2;
  unsigned workers = 1;
  std::filesystem::path out;
  std::string format = "jsonl";
};

/// Profiles of every prime in [lo, hi], ascending by p for any worker count.
std::vector<FixedPointProfile> compute_profiles(u64 lo, u64 hi, unsigned workers);

std::string encode_profile(const FixedPointProfile& profile);
/// Throws InputError describing the defect.
FixedPointProfile decode_profile(std::string_view line);

void write_profiles(std::ostream& out, const std::vector<FixedPointProfile>& profiles, Range range);

/// Reads a profile file; malformed lines raise InputError naming the line.
std::vector<FixedPointProfile> read_profiles(const std::filesystem::path& path);
std::vector<FixedPointProfile> read_profiles(std::istream& in, std::string_view name);

/// Runs the sweep and writes config.out. Returns the number of profiles.
std::size_t sweep(const SweepConfig& config);

struct AnalyzeOptions {
  std::filesystem::path out_dir = ".";
  stats::OrderFilter filter;
  std::size_t window = 100;
  std::size_t step = 1;
  stats::SortKey sort_key = stats::SortKey::kOrder;
  stats::NormalityOptions normality;
  stats::GofOptions gof;
  std::vector<std::string> inputs;  // echoed in the summary header
};

// Each analysis writes its CSV files into options.out_dir and a readable
// summary to `log`.
stats::NormalitySummary analyze_normality(const std::vector<FixedPointProfile>& profiles,
                                          const AnalyzeOptions& options, std::ostream& log);
stats::GofResult analyze_gof(const std::vector<FixedPointProfile>& profiles,
                             const AnalyzeOptions& options, std::ostream& log);
std::vector<stats::WindowResult> analyze_window(const std::vector<FixedPointProfile>& profiles,
                                                const AnalyzeOptions& options, std::ostream& log);
std::vector<stats::GofResult> analyze_small_orders(const std::vector<FixedPointProfile>& profiles,
                                                   const AnalyzeOptions& options, std::ostream& log);
std::vector<stats::GofResult> analyze_large_orders(const std::vector<FixedPointProfile>& profiles,
                                                   const AnalyzeOptions& options, std::ostream& log);

/// Checks every profile against the exact theorems. Returns 0 when all
/// pass, 1 otherwise, after listing per-theorem counts and offenders.
int verify(const std::vector<FixedPointProfile>& profiles, std::ostream& log);

inline constexpr u64 kOracleMaxP = 100'000;

/// Compares the census with brute force for every prime <= max_p and the
/// G(p) formula with enumeration wherever (p-1)p fits the oracle budget.
/// Returns 0 on agreement, 1 on the first mismatch. Throws InputError when
/// max_p exceeds kOracleMaxP.
int oracle_check(u64 max_p, std::ostream& log);

/// CSV number formatting: 6 significant digits, p-values to 4 places.
std::string fmt_real(double v);
std::string fmt_pvalue(double v);

}  // namespace selfpower::pipeline
