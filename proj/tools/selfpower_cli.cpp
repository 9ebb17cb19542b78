// selfpower: fixed-point censuses of x -> x^x mod p over prime ranges.
//
//   selfpower sweep --preset six-digit --workers 4 --out six.jsonl
//   selfpower verify --in six.jsonl
//   selfpower analyze gof --in six.jsonl --out-dir reports/
//   selfpower oracle-check --max-p 10000
//
// Exit codes: 0 success, 1 verification or oracle failure, 2 usage/input error.

#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "selfpower/pipeline.hpp"

namespace {

using selfpower::u64;
namespace pl = selfpower::pipeline;
namespace st = selfpower::stats;

constexpr int kExitUsage = 2;

std::vector<selfpower::FixedPointProfile> load_all(const std::vector<std::string>& inputs) {
  std::vector<selfpower::FixedPointProfile> all;
  for (const auto& path : inputs) {
    auto part = pl::read_profiles(path);
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.p() < b.p(); });
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed points of the self-power map x -> x^x mod p"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Census every prime in a range and write a profile file");
  std::optional<u64> from, to;
  std::string preset;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string sweep_out;
  auto* from_opt = sweep->add_option("--from", from, "Lower bound (inclusive)");
  auto* to_opt = sweep->add_option("--to", to, "Upper bound (inclusive)");
  auto* preset_opt = sweep->add_option("--preset", preset, "Named range")
                         ->check(CLI::IsMember({"six-digit", "seven-digit"}));
  preset_opt->excludes(from_opt)->excludes(to_opt);
  sweep->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_out, "Output profile file")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Statistical analyses of a profile file");
  std::string kind;
  std::vector<std::string> inputs;
  pl::AnalyzeOptions options;
  std::string out_dir = ".";
  std::string sort_key = "order";
  std::vector<u64> only_orders;
  analyze->add_option("kind", kind, "normality | gof | window | small-orders | large-orders")
      ->required()
      ->check(CLI::IsMember({"normality", "gof", "window", "small-orders", "large-orders"}));
  analyze->add_option("--in", inputs, "Profile file(s); several are combined")->required();
  analyze->add_flag("--exclude-special", options.filter.exclude_small_special,
                    "Also exclude orders 3, 4 and 6 from binomial tests");
  analyze->add_option("--only-order", only_orders, "Restrict binomial tests to these orders");
  analyze->add_option("--window", options.window, "Sliding-window size")->check(CLI::PositiveNumber);
  analyze->add_option("--step", options.step, "Sliding-window step")->check(CLI::PositiveNumber);
  analyze->add_option("--sort-key", sort_key, "Window sort key")
      ->check(CLI::IsMember({"order", "prime", "phi-over-d"}));
  analyze->add_option("--bins", options.normality.bin_width, "Histogram bin width")->check(CLI::PositiveNumber);
  analyze->add_option("--floor", options.gof.expected_floor, "Expected-count floor for category merging");
  analyze->add_option("--out-dir", out_dir, "Directory for CSV reports");

  // verify
  auto* verify = app.add_subcommand("verify", "Check profiles against the exact theorems");
  std::vector<std::string> verify_inputs;
  verify->add_option("--in", verify_inputs, "Profile file(s)")->required();

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check", "Cross-check the census and G(p) against brute force");
  u64 max_p = 0;
  oracle->add_option("--max-p", max_p, "Largest prime to check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sweep) {
      pl::SweepConfig config;
      if (!preset.empty()) {
        const auto range = pl::preset_range(preset);
        config.lo = range.lo;
        config.hi = range.hi;
      } else if (from && to) {
        config.lo = *from;
        config.hi = *to;
      } else {
        throw pl::InputError("sweep needs --preset or both --from and --to");
      }
      config.workers = workers;
      config.out = sweep_out;
      const auto n = pl::sweep(config);
      fmt::print("{} profiles for p in [{}, {}] written to {}\n", n, config.lo, config.hi, sweep_out);
      return 0;
    }
    if (*analyze) {
      options.out_dir = out_dir;
      options.inputs = inputs;
      options.sort_key = st::parse_sort_key(sort_key);
      options.filter.only_orders = only_orders;
      const auto profiles = load_all(inputs);
      if (kind == "normality") {
        pl::analyze_normality(profiles, options, std::cout);
      } else if (kind == "gof") {
        pl::analyze_gof(profiles, options, std::cout);
      } else if (kind == "window") {
        pl::analyze_window(profiles, options, std::cout);
      } else if (kind == "small-orders") {
        pl::analyze_small_orders(profiles, options, std::cout);
      } else {
        pl::analyze_large_orders(profiles, options, std::cout);
      }
      return 0;
    }
    if (*verify) return pl::verify(load_all(verify_inputs), std::cout);
    if (*oracle) return pl::oracle_check(max_p, std::cout);
  } catch (const pl::InputError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
