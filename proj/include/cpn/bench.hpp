#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpn/net.hpp"
#include "cpn/reachability.hpp"

namespace cpn {

enum class BenchAlgorithm { Binsearch, Milp };

struct BenchInstance {
  enum class Kind { Lattice, Random, File };
  Kind kind = Kind::Lattice;
  std::string label;
  // Lattice shape.
  int rows = 0;
  int cols = 0;
  // Random shape.
  int places = 0;
  int transitions = 0;
  long max_weight = 1;
  Rat density;
  std::uint64_t shape_seed = 0;
  // File instance.
  std::string path;
  // Shared.
  Rat resource_fraction;
};

struct BenchConfig {
  std::vector<BenchInstance> instances;
  std::vector<BenchAlgorithm> algorithms;
  int repetitions = 100;
  Rat epsilon = Rat(1, 1000);
  int cap = 400;
  std::uint64_t seed = 0;
  ReachMode mode = ReachMode::Limit;
};

struct BenchRow {
  std::string instance;
  BenchAlgorithm algorithm = BenchAlgorithm::Binsearch;
  int rows = 0;
  int cols = 0;
  Rat resource_fraction;
  int repetitions = 0;
  double mean_seconds = 0.0;
  // Binsearch only: mean wall time of a single at_least_reachable call.
  std::optional<double> mean_alr_call_seconds;
  // Milp only: mean number of exclusion cuts per trial.
  std::optional<double> cuts_mean;
  // Structure size, for scaling checks.
  int num_places = 0;
  int num_transitions = 0;
};

// JSON config: {"seed": .., "repetitions": .., "epsilon": "1/1000",
// "cap": 400, "mode": "limit", "algorithms": ["binsearch", "milp"],
// "instances": [{"type": "lattice", "rows": 5, "cols": 5,
//                "resource_fraction": "1/10"}, ...]}
BenchConfig parse_bench_config(const std::string& text);

// One row per instance x algorithm. Every repetition draws a fresh resource
// placement and goal (the gen_lattice distribution); both algorithms see the
// same per-trial draws. Timing wraps the solve call only.
std::vector<BenchRow> run_bench(const BenchConfig& config);

// CSV with the fixed column set; times use 5 decimals.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace cpn
