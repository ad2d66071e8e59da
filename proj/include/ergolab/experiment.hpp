#pragma once

#include "ergolab/convexity.hpp"
#include "ergolab/dynamics.hpp"
#include "ergolab/fluctuation.hpp"
#include "ergolab/folner.hpp"
#include "ergolab/serialize.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ergolab {

struct FamilySpec {
  enum class Type { kStandard, kGreedy, kRefined };
  Type type = Type::kStandard;
  std::int64_t n_max = 60;
  std::int64_t budget = 1'000'000;  // greedy
  std::int64_t lambda = 1;          // refined
};

struct ObservableSpec {
  std::optional<std::vector<double>> values;
  std::string distribution = "uniform";  // uniform | normal | indicator | constant
  std::uint32_t point = 0;               // indicator
  double constant = 1.0;                 // constant
  double scale = 1.0;
};

struct ExperimentConfig {
  std::string group = "Z";
  FamilySpec family;
  Json system;  // preset or explicit definition
  ObservableSpec observable;
  double p = 2.0;
  std::optional<Json> modulus;  // defaults to the L^p modulus for p
  std::vector<double> epsilons{0.3};
  std::optional<double> eta;
  std::optional<double> lower_bound;
  std::int64_t window = 60;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = ".";
};

// Parses and validates a config; unknown group/family/modulus names and a
// window longer than the family are rejected here.
ExperimentConfig config_from_json(const Json& j);

// ERGOLAB_SEED, when set, replaces the configured seed.
std::uint64_t effective_seed(std::uint64_t configured);

struct ExperimentResult {
  int exit_code = 0;  // 0 all verdicts true, 2 some verdict false
  std::string averages_csv;
  Json report;
  Json modulus;
};

ExperimentResult run_experiment(const ExperimentConfig& config);
// Writes averages.csv, report.json and modulus.json into the output directory.
void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir);

FiniteMeasureSystem system_from_spec(const Group& group, const Json& spec);

// Deterministic generators (std::mt19937_64 plus explicit conversions, so
// outputs do not depend on the standard library's distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal();
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

Observable random_observable(Rng& rng, std::size_t points, double p, const std::string& distribution = "uniform",
                             double scale = 1.0);
// Z acting on 2..max_points points through one random permutation, with
// masses constant on its cycles.
FiniteMeasureSystem random_cyclic_system(Rng& rng, std::uint32_t max_points);

}  // namespace ergolab
