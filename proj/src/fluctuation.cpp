#include "ergolab/fluctuation.hpp"

#include "ergolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ergolab {

DistanceTable::DistanceTable(std::int64_t length, const std::function<double(std::int64_t, std::int64_t)>& distance)
    : length_(length) {
  if (length < 1) throw DomainError("distance table needs at least one term");
  upper_.reserve(static_cast<std::size_t>(length * (length - 1) / 2));
  for (std::int64_t n = 1; n <= length; ++n)
    for (std::int64_t m = n + 1; m <= length; ++m) {
      const double d = distance(n, m);
      if (!std::isfinite(d)) throw DataError("non-finite distance between terms " + std::to_string(n) + " and " +
                                             std::to_string(m));
      upper_.push_back(d);
    }
}

DistanceTable DistanceTable::from_reals(const std::vector<double>& values) {
  return DistanceTable(static_cast<std::int64_t>(values.size()), [&](std::int64_t n, std::int64_t m) {
    return std::abs(values[static_cast<std::size_t>(n - 1)] - values[static_cast<std::size_t>(m - 1)]);
  });
}

DistanceTable DistanceTable::from_observables(const FiniteMeasureSystem& system, const std::vector<Observable>& terms) {
  return DistanceTable(static_cast<std::int64_t>(terms.size()), [&](std::int64_t n, std::int64_t m) {
    return lp_distance(system, terms[static_cast<std::size_t>(n - 1)], terms[static_cast<std::size_t>(m - 1)]);
  });
}

double DistanceTable::operator()(std::int64_t n, std::int64_t m) const {
  if (n == m) return 0.0;
  if (n > m) std::swap(n, m);
  if (n < 1 || m > length_) throw StructuralError("distance index out of range");
  // Row n starts after rows 1..n-1, which hold (L-1) + ... + (L-n+1) cells.
  const std::int64_t row_start = (n - 1) * length_ - (n - 1) * n / 2;
  return upper_[static_cast<std::size_t>(row_start + (m - n - 1))];
}

Chain max_chain(const DistanceTable& distances, double eps, const IndexMap& beta) {
  if (!std::isfinite(eps)) throw DomainError("max_chain: eps must be finite");
  const std::int64_t L = distances.length();
  std::vector<std::optional<std::int64_t>> gap(static_cast<std::size_t>(L + 1));
  if (beta) {
    for (std::int64_t n = 1; n <= L; ++n) {
      gap[n] = beta(n);
      if (gap[n] && *gap[n] <= n)
        throw DomainError("max_chain: beta(" + std::to_string(n) + ") = " + std::to_string(*gap[n]) +
                          " must exceed n");
    }
  }
  std::vector<std::int64_t> best(static_cast<std::size_t>(L + 1), 1);
  std::vector<std::int64_t> pred(static_cast<std::size_t>(L + 1), 0);
  for (std::int64_t m = 1; m <= L; ++m) {
    for (std::int64_t n = 1; n < m; ++n) {
      if (beta && (!gap[n] || m < *gap[n])) continue;
      if (distances(n, m) < eps) continue;
      if (best[n] + 1 > best[m]) {
        best[m] = best[n] + 1;
        pred[m] = n;
      }
    }
  }
  std::int64_t end = 1;
  for (std::int64_t m = 2; m <= L; ++m)
    if (best[m] > best[end]) end = m;
  Chain chain;
  for (std::int64_t m = end; m != 0; m = pred[m]) chain.indices.push_back(m);
  std::reverse(chain.indices.begin(), chain.indices.end());
  return chain;
}

std::string to_string(NormBranch b) { return b == NormBranch::kUnitBall ? "norm<=1" : "norm>1"; }

BoundInputs resolve_bound_inputs(const ConvexityModulus& modulus, double norm_x, double eps,
                                 std::optional<double> eta, std::optional<double> lower) {
  if (!std::isfinite(norm_x) || norm_x < 0) throw DomainError("||x|| must be finite and nonnegative");
  if (!(eps > 0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
  BoundInputs in;
  in.norm = norm_x;
  in.eps = eps;
  in.branch = norm_x <= 1.0 ? NormBranch::kUnitBall : NormBranch::kOutside;
  in.modulus_argument = in.branch == NormBranch::kUnitBall ? eps : eps / norm_x;
  in.u = modulus(in.modulus_argument);
  in.eta = eta.value_or(in.u / 4.0);
  const char* strict = in.branch == NormBranch::kUnitBall ? "eta < u(eps)/2" : "eta < u(eps/||x||)/2";
  if (!(in.eta > 0.0) || !(in.eta < in.u / 2.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "precondition " << strict << " violated: eta=" << in.eta << ", u/2=" << in.u / 2.0;
    if (!(in.eta > 0.0)) msg << " (eta must also be positive)";
    throw DomainError(msg.str());
  }
  in.lower = lower.value_or(0.0);
  if (!(in.lower >= 0.0 && in.lower <= norm_x)) throw DomainError("lower bound L must lie in [0, ||x||]");
  if (in.branch == NormBranch::kUnitBall) {
    in.folner_epsilon = norm_x > 0 ? in.eta / (3.0 * norm_x) : std::numeric_limits<double>::infinity();
  } else {
    in.folner_epsilon = in.eta / 3.0;
  }
  return in;
}

std::int64_t theorem_bound(const BoundInputs& in) {
  const double numerator = in.branch == NormBranch::kUnitBall ? in.norm - in.lower : 1.0 - in.lower / in.norm;
  const double value = numerator / (in.u / 2.0 - in.eta);
  // Guard so that a quotient landing a rounding error below an integer
  // still floors to it.
  const double floored = std::floor(value + 1e-12);
  if (!(floored < 9.0e18)) throw DomainError("fluctuation bound does not fit in 64 bits");
  return static_cast<std::int64_t>(std::max(0.0, floored));
}

std::int64_t theorem_bound(const ConvexityModulus& modulus, double norm_x, double eps, double eta,
                           std::optional<double> lower) {
  return theorem_bound(resolve_bound_inputs(modulus, norm_x, eps, eta, lower));
}

std::int64_t corollary_bound(const ConvexityModulus& modulus, double norm_x, double eps, double eta,
                             std::int64_t lambda, std::optional<double> lower) {
  if (lambda < 1) throw DomainError("lambda must be >= 1");
  const std::int64_t inner = theorem_bound(modulus, norm_x, eps, eta, lower);
  return checked::add(checked::mul(lambda, inner), lambda);
}

Rational folner_epsilon_rational(const BoundInputs& in) {
  const Rational eta = rational_from_double(in.eta);
  if (in.branch == NormBranch::kUnitBall) {
    if (in.norm == 0) throw DomainError("fast epsilon undefined for the zero vector");
    return eta / (Rational(3) * rational_from_double(in.norm));
  }
  return eta / Rational(3);
}

namespace {

FluctuationReport degenerate_report(ChainMode mode, double eps, std::int64_t window) {
  FluctuationReport r;
  r.mode = mode;
  r.inputs.eps = eps;
  r.window = window;
  r.degenerate = true;
  r.verdict = true;
  return r;
}

}  // namespace

FluctuationReport verify_main_theorem(const FiniteMeasureSystem& system, const FolnerFamily& family,
                                      const ModulusTable& table, const ConvexityModulus& modulus,
                                      const Observable& f, double eps, const VerifyOptions& options) {
  const std::int64_t window = options.window;
  if (window < 1 || window > family.length())
    throw StructuralError("verification window " + std::to_string(window) + " outside the family (length " +
                          std::to_string(family.length()) + ")");
  const double norm = lp_norm(system, f);
  if (norm == 0.0) return degenerate_report(ChainMode::kAtDistance, eps, window);

  FluctuationReport report;
  report.mode = ChainMode::kAtDistance;
  report.inputs = resolve_bound_inputs(modulus, norm, eps, options.eta, options.lower);
  report.window = window;
  const Rational required = folner_epsilon_rational(report.inputs);
  if (table.epsilon() > required)
    throw UncertifiedWindow("modulus table taken at eps=" + to_string(table.epsilon()) +
                            " does not cover the required " + to_string(required));
  if (!table.certifies(window))
    throw UncertifiedWindow("modulus table is certified only up to m=" +
                            std::to_string(table.certified_up_to().value_or(0)) + ", window is " +
                            std::to_string(window));
  for (std::int64_t n = 1; n <= window; ++n) {
    if (!table.has(n)) throw UncertifiedWindow("modulus table has no entry for n=" + std::to_string(n));
  }
  ModulusTable truncated(table.epsilon(), table.kind(), table.certified_up_to());
  for (std::int64_t n = 1; n <= window; ++n) truncated.set(n, table.beta(n));
  const ModulusTable env = envelope(truncated);
  report.beta_epsilon = to_string(table.epsilon());
  report.certified_window = table.kind() == ModulusKind::kAnalytic ? std::nullopt : table.certified_up_to();
  for (std::int64_t n = 1; n <= window; ++n) {
    auto b = env.beta(n);
    // chains are strictly increasing, so beta(n) <= n adds nothing
    if (b) b = std::max(*b, n + 1);
    report.beta_used.push_back(b);
  }

  const auto averages = average_sequence(system, family, f, window);
  const DistanceTable distances = DistanceTable::from_observables(system, averages);
  const Chain chain = max_chain(distances, eps, [&](std::int64_t n) { return report.beta_used[n - 1]; });
  report.chain = chain.indices;
  report.count = chain.count();
  report.chain_length = static_cast<std::int64_t>(chain.indices.size());
  report.bound = theorem_bound(report.inputs);
  report.verdict = report.count <= report.bound;
  return report;
}

FluctuationReport verify_main_theorem(const FiniteMeasureSystem& system, const FolnerFamily& family,
                                      const ConvexityModulus& modulus, const Observable& f, double eps,
                                      const VerifyOptions& options) {
  const double norm = lp_norm(system, f);
  if (norm == 0.0) return degenerate_report(ChainMode::kAtDistance, eps, options.window);
  const BoundInputs in = resolve_bound_inputs(modulus, norm, eps, options.eta, options.lower);
  if (options.window < 1 || options.window > family.length())
    throw StructuralError("verification window outside the family");
  const ModulusTable table = modulus_table(family, folner_epsilon_rational(in), options.window, options.window);
  return verify_main_theorem(system, family, table, modulus, f, eps, options);
}

FluctuationReport verify_corollary(const FiniteMeasureSystem& system, const FolnerFamily& fast_family,
                                   std::int64_t lambda, const ConvexityModulus& modulus, const Observable& f,
                                   double eps, const VerifyOptions& options) {
  if (lambda < 1) throw DomainError("lambda must be >= 1");
  const std::int64_t window = std::min(options.window, fast_family.length());
  if (window < 1) throw StructuralError("verification window must be positive");
  const double norm = lp_norm(system, f);
  if (norm == 0.0) {
    auto r = degenerate_report(ChainMode::kPlain, eps, window);
    r.lambda = lambda;
    return r;
  }
  FluctuationReport report;
  report.mode = ChainMode::kPlain;
  report.lambda = lambda;
  report.window = window;
  report.inputs = resolve_bound_inputs(modulus, norm, eps, options.eta, options.lower);
  const Rational required = folner_epsilon_rational(report.inputs);
  report.beta_epsilon = to_string(required);
  const CheckReport fast = check_fast(fast_family, lambda, required, window);
  if (!fast.pass) {
    const auto& v = *fast.first_violation;
    throw UncertifiedWindow("family is not (" + std::to_string(lambda) + ", " + to_string(required) +
                            ")-fast: n=" + std::to_string(v.n) + ", m=" + std::to_string(v.m) + ", g=" +
                            to_string(v.g) + ", ratio=" + to_string(v.ratio));
  }
  report.certified_window = window;
  const auto averages = average_sequence(system, fast_family, f, window);
  const Chain chain = max_chain(DistanceTable::from_observables(system, averages), eps);
  report.chain = chain.indices;
  report.count = chain.count();
  report.chain_length = static_cast<std::int64_t>(chain.indices.size());
  report.bound = checked::add(checked::mul(lambda, theorem_bound(report.inputs)), lambda);
  report.verdict = report.count <= report.bound;
  return report;
}

}  // namespace ergolab
