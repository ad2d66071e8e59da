#pragma once

#include "ergolab/convexity.hpp"
#include "ergolab/dynamics.hpp"
#include "ergolab/folner.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ergolab {

// Symmetric distances d(n, m) between terms 1..L of a sequence, filled once.
class DistanceTable {
 public:
  DistanceTable(std::int64_t length, const std::function<double(std::int64_t, std::int64_t)>& distance);
  static DistanceTable from_reals(const std::vector<double>& values);
  static DistanceTable from_observables(const FiniteMeasureSystem& system, const std::vector<Observable>& terms);

  std::int64_t length() const noexcept { return length_; }
  double operator()(std::int64_t n, std::int64_t m) const;

 private:
  std::int64_t length_;
  std::vector<double> upper_;  // row-major strict upper triangle
};

// beta(n) for 1-based n; nullopt means no admissible successor.
using IndexMap = std::function<std::optional<std::int64_t>(std::int64_t)>;

struct Chain {
  std::vector<std::int64_t> indices;  // n_1 < n_2 < ... (1-based)
  // Number of eps-separated consecutive pairs, i.e. indices.size() - 1.
  std::int64_t count() const { return indices.empty() ? 0 : static_cast<std::int64_t>(indices.size()) - 1; }
};

// Longest n_1 < ... < n_k with d(n_i, n_{i+1}) >= eps and, when beta is
// given, n_{i+1} >= beta(n_i). Ties go to the lexicographically smallest
// chain end, then the smallest predecessor.
Chain max_chain(const DistanceTable& distances, double eps, const IndexMap& beta = nullptr);

enum class NormBranch { kUnitBall, kOutside };
std::string to_string(NormBranch b);

// Everything the bound needs once ||x|| is known.
struct BoundInputs {
  NormBranch branch = NormBranch::kUnitBall;
  double norm = 0;
  double eps = 0;
  double modulus_argument = 0;  // eps or eps / ||x||
  double u = 0;                 // u(modulus_argument)
  double eta = 0;
  double lower = 0;             // L
  // Second argument of the Folner modulus: eta / (3 ||x||) or eta / 3.
  double folner_epsilon = 0;
};

// eta defaults to u(branch eps) / 4, L to 0. Throws DomainError on eta >= u/2,
// eta <= 0, or L outside [0, ||x||].
BoundInputs resolve_bound_inputs(const ConvexityModulus& modulus, double norm_x, double eps,
                                 std::optional<double> eta = std::nullopt, std::optional<double> lower = std::nullopt);

std::int64_t theorem_bound(const ConvexityModulus& modulus, double norm_x, double eps, double eta,
                           std::optional<double> lower = std::nullopt);
std::int64_t theorem_bound(const BoundInputs& in);
std::int64_t corollary_bound(const ConvexityModulus& modulus, double norm_x, double eps, double eta,
                             std::int64_t lambda, std::optional<double> lower = std::nullopt);

enum class ChainMode { kPlain, kAtDistance };

struct FluctuationReport {
  ChainMode mode = ChainMode::kPlain;
  BoundInputs inputs;
  std::vector<std::int64_t> chain;
  std::int64_t count = 0;         // jumps: chain length - 1
  std::int64_t chain_length = 0;  // the k of "k < N"
  std::int64_t bound = 0;
  std::int64_t lambda = 0;        // corollary only
  std::vector<std::optional<std::int64_t>> beta_used;  // at-distance only, n = 1..window
  std::string beta_epsilon;       // exact rational the modulus was taken at
  std::optional<std::int64_t> certified_window;
  std::int64_t window = 0;
  bool degenerate = false;        // f == 0
  bool verdict = true;
};

struct VerifyOptions {
  std::optional<double> eta;
  std::optional<double> lower;
  std::int64_t window = 60;
};

// Runs the at-distance fluctuation count for (A_n f) against the theorem's
// bound using a caller-supplied modulus table. The table must be taken at an
// epsilon no larger than the branch's eta/(3||f||) or eta/3 and certify the
// window; otherwise throws UncertifiedWindow.
FluctuationReport verify_main_theorem(const FiniteMeasureSystem& system, const FolnerFamily& family,
                                      const ModulusTable& table, const ConvexityModulus& modulus,
                                      const Observable& f, double eps, const VerifyOptions& options);
// Same, computing the modulus table at exactly the required epsilon.
FluctuationReport verify_main_theorem(const FiniteMeasureSystem& system, const FolnerFamily& family,
                                      const ConvexityModulus& modulus, const Observable& f, double eps,
                                      const VerifyOptions& options);

// Plain fluctuation count against lambda * B + lambda. The family must be
// (lambda, eta/(3||f||))-fast (or (lambda, eta/3)-fast) over the window,
// which is capped at the family length.
FluctuationReport verify_corollary(const FiniteMeasureSystem& system, const FolnerFamily& fast_family,
                                   std::int64_t lambda, const ConvexityModulus& modulus, const Observable& f,
                                   double eps, const VerifyOptions& options);

// Exact rational form of the fast-family epsilon the corollary needs.
Rational folner_epsilon_rational(const BoundInputs& in);

}  // namespace ergolab
