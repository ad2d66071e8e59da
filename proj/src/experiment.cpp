#include "ergolab/experiment.hpp"

#include "ergolab/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ergolab {

double Rng::normal() {
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Observable random_observable(Rng& rng, std::size_t points, double p, const std::string& distribution, double scale) {
  Observable f{std::vector<double>(points), p};
  if (distribution == "uniform") {
    for (auto& v : f.values) v = scale * rng.uniform(-1.0, 1.0);
  } else if (distribution == "normal") {
    for (auto& v : f.values) v = scale * rng.normal();
  } else if (distribution == "indicator") {
    f.values[rng.below(points)] = scale;
  } else {
    throw StructuralError("unknown observable distribution '" + distribution + "'");
  }
  return f;
}

FiniteMeasureSystem random_cyclic_system(Rng& rng, std::uint32_t max_points) {
  if (max_points < 2) throw DomainError("random system needs at least two points");
  const auto M = static_cast<std::uint32_t>(2 + rng.below(max_points - 1));
  std::vector<std::uint32_t> images(M);
  for (std::uint32_t i = 0; i < M; ++i) images[i] = i;
  for (std::uint32_t i = M - 1; i > 0; --i) std::swap(images[i], images[rng.below(i + 1)]);
  Permutation sigma(images);
  std::vector<Rational> weights(M);
  for (const auto& cycle : sigma.cycles()) {
    const Rational w(static_cast<long>(1 + rng.below(9)), static_cast<long>(1 + rng.below(9)));
    for (auto s : cycle) weights[s] = w;
  }
  return FiniteMeasureSystem(Group::integers(), std::move(weights), {std::move(sigma)});
}

std::uint64_t effective_seed(std::uint64_t configured) {
  if (const char* env = std::getenv("ERGOLAB_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw DataError(std::string("ERGOLAB_SEED is not an integer: ") + env);
    return v;
  }
  return configured;
}

FiniteMeasureSystem system_from_spec(const Group& group, const Json& spec) {
  if (!spec.contains("preset")) return system_from_json(group, spec);
  const auto preset = spec.at("preset").get<std::string>();
  const auto N = spec.value("N", 12u);
  FiniteMeasureSystem system = [&] {
    if (preset == "rotation") return rotation_system(N);
    if (preset == "torus") return torus_translation_system(N, group.rank());
    if (preset == "heisenberg-abelianized") return heisenberg_abelianized_system(N);
    if (preset == "heisenberg-mod") return heisenberg_mod_system(N);
    throw StructuralError("unknown system preset '" + preset + "'");
  }();
  if (!(system.group() == group))
    throw StructuralError("system preset '" + preset + "' does not act through group " + group.name());
  return system;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  c.group = j.value("group", c.group);
  const Group group = Group::from_name(c.group);
  if (j.contains("family")) {
    const auto& fj = j.at("family");
    const auto type = fj.value("type", std::string("standard"));
    if (type == "standard") {
      c.family.type = FamilySpec::Type::kStandard;
    } else if (type == "greedy") {
      c.family.type = FamilySpec::Type::kGreedy;
    } else if (type == "refined") {
      c.family.type = FamilySpec::Type::kRefined;
    } else {
      throw StructuralError("unknown family type '" + type + "'");
    }
    c.family.n_max = fj.value("n_max", c.family.n_max);
    c.family.budget = fj.value("budget", c.family.budget);
    c.family.lambda = fj.value("lambda", c.family.lambda);
  }
  if (!j.contains("system")) throw StructuralError("config needs a 'system'");
  c.system = j.at("system");
  if (j.contains("observable")) {
    const auto& oj = j.at("observable");
    if (oj.contains("values")) c.observable.values = oj.at("values").get<std::vector<double>>();
    c.observable.distribution = oj.value("distribution", c.observable.distribution);
    c.observable.point = oj.value("point", c.observable.point);
    c.observable.constant = oj.value("constant", c.observable.constant);
    c.observable.scale = oj.value("scale", c.observable.scale);
  }
  c.p = j.value("p", c.p);
  if (j.contains("modulus")) c.modulus = j.at("modulus");
  if (j.contains("epsilons")) c.epsilons = j.at("epsilons").get<std::vector<double>>();
  if (j.contains("eta") && !j.at("eta").is_null() && !j.at("eta").is_string()) c.eta = j.at("eta").get<double>();
  if (j.contains("lower_bound") && !j.at("lower_bound").is_null()) c.lower_bound = j.at("lower_bound").get<double>();
  c.window = j.value("window", c.window);
  c.seed = j.value("seed", c.seed);
  if (j.contains("outputs")) c.output_dir = j.at("outputs").value("dir", std::string("."));

  if (c.epsilons.empty()) throw StructuralError("config needs at least one epsilon");
  if (c.window < 1) throw StructuralError("window must be positive");
  if (c.family.type != FamilySpec::Type::kRefined && c.window > c.family.n_max)
    throw StructuralError("window " + std::to_string(c.window) + " exceeds the family length " +
                          std::to_string(c.family.n_max));
  // Resolve names now so errors surface before any work.
  system_from_spec(group, c.system);
  if (c.modulus) convexity_from_json(*c.modulus);
  return c;
}

namespace {

Observable build_observable(const ExperimentConfig& c, const FiniteMeasureSystem& system, std::uint64_t seed) {
  const auto& spec = c.observable;
  if (spec.values) return Observable{*spec.values, c.p};
  if (spec.distribution == "constant") return Observable{std::vector<double>(system.size(), spec.constant), c.p};
  if (spec.distribution == "indicator" && spec.point < system.size()) {
    Observable f{std::vector<double>(system.size(), 0.0), c.p};
    f.values[spec.point] = spec.scale;
    return f;
  }
  Rng rng(seed);
  return random_observable(rng, system.size(), c.p, spec.distribution, spec.scale);
}

std::string averages_csv(const FiniteMeasureSystem& system, const FolnerFamily& family, const Observable& f,
                         std::int64_t window) {
  std::ostringstream out;
  out << "n,F_n_size,norm_Anf\n";
  const auto averages = average_sequence(system, family, f, window);
  for (std::int64_t n = 1; n <= window; ++n) {
    out << n << ',' << family.size(n) << ',' << format_double(lp_norm(system, averages[n - 1])) << '\n';
  }
  return out.str();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& c) {
  const std::uint64_t seed = effective_seed(c.seed);
  const Group group = Group::from_name(c.group);
  const FiniteMeasureSystem system = system_from_spec(group, c.system);
  const Observable f = build_observable(c, system, seed);
  const ConvexityModulus modulus = c.modulus ? convexity_from_json(*c.modulus) : ConvexityModulus::for_lp(c.p);
  VerifyOptions options;
  options.eta = c.eta;
  options.lower = c.lower_bound;
  options.window = c.window;

  ExperimentResult result;
  result.report = Json::object();
  result.report["seed"] = seed;
  result.report["group"] = group.name();
  result.report["convexity_modulus"] = modulus.name();
  result.report["norm_f"] = lp_norm(system, f);
  Json reports = Json::array();
  Json tables = Json::array();
  bool all_true = true;

  if (c.family.type == FamilySpec::Type::kRefined) {
    const FolnerFamily base = FolnerFamily::standard(group, c.family.n_max);
    const double norm = lp_norm(system, f);
    bool csv_written = false;
    for (double eps : c.epsilons) {
      if (norm == 0.0) {
        auto r = verify_corollary(system, base, c.family.lambda, modulus, f, eps, options);
        all_true = all_true && r.verdict;
        reports.push_back(report_to_json(r));
        continue;
      }
      const BoundInputs in = resolve_bound_inputs(modulus, norm, eps, c.eta, c.lower_bound);
      const Refinement refined = fast_refinement(base, folner_epsilon_rational(in));
      const auto r = verify_corollary(system, refined.family, c.family.lambda, modulus, f, eps, options);
      Json rj = report_to_json(r);
      rj["source_indices"] = refined.source_index;
      reports.push_back(std::move(rj));
      all_true = all_true && r.verdict;
      if (!csv_written) {
        result.averages_csv = averages_csv(system, refined.family, f, std::min(c.window, refined.family.length()));
        csv_written = true;
      }
    }
    if (!csv_written) result.averages_csv = averages_csv(system, base, f, std::min(c.window, base.length()));
  } else {
    const FolnerFamily family = c.family.type == FamilySpec::Type::kGreedy
                                    ? greedy_folner(group, c.family.n_max, c.family.budget)
                                    : FolnerFamily::standard(group, c.family.n_max);
    result.averages_csv = averages_csv(system, family, f, c.window);
    const double norm = lp_norm(system, f);
    for (double eps : c.epsilons) {
      if (norm == 0.0) {
        auto r = verify_main_theorem(system, family, modulus, f, eps, options);
        all_true = all_true && r.verdict;
        reports.push_back(report_to_json(r));
        continue;
      }
      const BoundInputs in = resolve_bound_inputs(modulus, norm, eps, c.eta, c.lower_bound);
      const ModulusTable table = modulus_table(family, folner_epsilon_rational(in), c.window, c.window);
      tables.push_back(modulus_table_to_json(table, group.name() + ":" + to_string(family.provenance())));
      const auto r = verify_main_theorem(system, family, table, modulus, f, eps, options);
      all_true = all_true && r.verdict;
      reports.push_back(report_to_json(r));
    }
  }
  result.report["reports"] = std::move(reports);
  result.report["all_verdicts"] = all_true;
  result.modulus = Json{{"tables", std::move(tables)}};
  result.exit_code = all_true ? 0 : 2;
  return result;
}

void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / name).string());
    out << text;
  };
  write("averages.csv", result.averages_csv);
  write("report.json", result.report.dump(2) + "\n");
  write("modulus.json", result.modulus.dump(2) + "\n");
}

}  // namespace ergolab
