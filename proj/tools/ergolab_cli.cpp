#include "ergolab/errors.hpp"
#include "ergolab/experiment.hpp"
#include "ergolab/serialize.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace ergolab;

namespace {

struct FamilyArgs {
  std::string group = "Z";
  std::string family = "standard";
  std::int64_t n_max = 60;
  std::int64_t budget = 1'000'000;
};

void add_family_options(CLI::App* cmd, FamilyArgs& a) {
  cmd->add_option("--group", a.group, "Z, Z^d (d <= 4) or H3");
  cmd->add_option("--family", a.family, "standard or greedy")->check(CLI::IsMember({"standard", "greedy"}));
  cmd->add_option("--n-max", a.n_max, "family length");
  cmd->add_option("--budget", a.budget, "greedy search budget per stage");
}

FolnerFamily make_family(const FamilyArgs& a, std::int64_t at_least) {
  const Group g = Group::from_name(a.group);
  const std::int64_t n = std::max(a.n_max, at_least);
  if (a.family == "greedy") return greedy_folner(g, n, a.budget);
  return FolnerFamily::standard(g, n);
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<double> parse_data(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  ss.imbue(std::locale::classic());
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream cell(item);
    cell.imbue(std::locale::classic());
    double v = 0;
    if (!(cell >> v)) throw DataError("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw DataError("empty data");
  return out;
}

ConvexityModulus modulus_from_args(const std::string& type, double p, double K) {
  if (type == "hanner") return ConvexityModulus::hanner(p);
  if (type == "p-uniform") return ConvexityModulus::p_uniform(K, p);
  if (type == "small-p") return ConvexityModulus::small_p(p);
  return ConvexityModulus::for_lp(p);
}

int run_config(const std::string& path, std::optional<std::string> out_dir, std::optional<FamilySpec::Type> force) {
  auto config = config_from_json(read_json(path));
  if (force) config.family.type = *force;
  const auto result = run_experiment(config);
  write_artifacts(result, out_dir ? std::filesystem::path(*out_dir) : config.output_dir);
  std::cout << result.report.dump(2) << '\n';
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolab: quantitative mean ergodic experiments"};
  app.require_subcommand(1);
  int code = 0;

  // folner
  auto* folner = app.add_subcommand("folner", "Folner families");
  folner->require_subcommand(1);
  FamilyArgs build_args;
  std::string build_out;
  auto* build = folner->add_subcommand("build", "build a family and print it as JSON");
  add_family_options(build, build_args);
  build->add_option("--out", build_out, "write to this file instead of stdout");
  build->callback([&] {
    const auto j = family_to_json(make_family(build_args, 1)).dump(2);
    if (build_out.empty()) {
      std::cout << j << '\n';
    } else {
      std::ofstream(build_out, std::ios::binary) << j << '\n';
    }
  });

  FamilyArgs check_args;
  std::int64_t check_n = 1, check_window = 60;
  std::string check_eps = "1/10";
  std::optional<std::int64_t> check_lambda;
  auto* check = folner->add_subcommand("check", "convergence modulus beta(n, eps), or a fastness check");
  add_family_options(check, check_args);
  check->add_option("--n", check_n, "index n");
  check->add_option("--eps", check_eps, "epsilon (decimal or a/b)");
  check->add_option("--window", check_window, "largest m examined");
  check->add_option("--fast-lambda", check_lambda, "check (lambda, eps)-fastness instead");
  check->callback([&] {
    const Rational eps = parse_rational(check_eps);
    const auto fam = make_family(check_args, check_window);
    if (check_lambda) {
      const auto r = check_fast(fam, *check_lambda, eps, check_window);
      if (r.pass) {
        std::cout << "fast: yes\n";
      } else {
        const auto& v = *r.first_violation;
        std::cout << "fast: no (n=" << v.n << ", m=" << v.m << ", ratio=" << to_string(v.ratio) << ")\n";
        code = 2;
      }
      return;
    }
    const auto v = convergence_modulus(fam, check_n, eps, check_window);
    std::cout << "beta = " << v.beta << '\n';
  });

  std::string refine_group = "Z", refine_eps = "1/2";
  std::int64_t refine_terms = 5, refine_n_max = 1'000'000'000'000;
  auto* refine = folner->add_subcommand("refine", "(1, eps)-fast subsequence of the standard family");
  refine->add_option("--group", refine_group);
  refine->add_option("--eps", refine_eps);
  refine->add_option("--terms", refine_terms, "number of terms wanted");
  refine->add_option("--n-max", refine_n_max, "length of the source family");
  refine->callback([&] {
    const auto r = fast_refinement(FolnerFamily::standard(Group::from_name(refine_group), refine_n_max),
                                   parse_rational(refine_eps), refine_terms);
    std::cout << Json(r.source_index).dump() << '\n';
  });

  // modulus
  auto* modulus = app.add_subcommand("modulus", "convergence modulus tables");
  modulus->require_subcommand(1);
  FamilyArgs mod_args;
  std::string mod_eps = "1/10";
  std::int64_t mod_n_hi = 10, mod_window = 60;
  auto* compute = modulus->add_subcommand("compute", "beta(n, eps) for n = 1..n-hi as JSON");
  add_family_options(compute, mod_args);
  compute->add_option("--eps", mod_eps);
  compute->add_option("--n-hi", mod_n_hi);
  compute->add_option("--window", mod_window);
  compute->callback([&] {
    const auto fam = make_family(mod_args, mod_window);
    const auto t = modulus_table(fam, parse_rational(mod_eps), mod_n_hi, mod_window);
    std::cout << modulus_table_to_json(t, mod_args.group + ":" + to_string(fam.provenance())).dump(2) << '\n';
  });

  // avg
  auto* avg = app.add_subcommand("avg", "ergodic averages");
  avg->require_subcommand(1);
  std::string avg_config;
  auto* avg_run = avg->add_subcommand("run", "print averages.csv for a config");
  avg_run->add_option("--config", avg_config)->required();
  avg_run->callback([&] {
    auto c = config_from_json(read_json(avg_config));
    c.epsilons.clear();
    std::cout << run_experiment(c).averages_csv;
  });

  // fluct
  auto* fluct = app.add_subcommand("fluct", "fluctuation counts");
  fluct->require_subcommand(1);
  double fluct_eps = 1;
  std::string fluct_data;
  std::optional<std::int64_t> fluct_gap;
  auto* count = fluct->add_subcommand("count", "count eps-fluctuations of a real sequence");
  count->add_option("--eps", fluct_eps)->required();
  count->add_option("--data", fluct_data, "comma-separated values")->required();
  count->add_option("--gap", fluct_gap, "at-distance mode with beta(n) = n + gap");
  count->callback([&] {
    const auto table = DistanceTable::from_reals(parse_data(fluct_data));
    IndexMap beta;
    if (fluct_gap) beta = [g = *fluct_gap](std::int64_t n) { return n + g; };
    std::cout << max_chain(table, fluct_eps, beta).count() << '\n';
  });

  // bound
  auto* bound = app.add_subcommand("bound", "fluctuation bounds");
  bound->require_subcommand(1);
  double b_p = 2, b_K = 1, b_eps = 0.5, b_norm = 1;
  std::string b_type = "lp";
  std::optional<double> b_eta, b_lower;
  std::optional<std::int64_t> b_lambda;
  auto* eval = bound->add_subcommand("eval", "evaluate the theorem (or corollary) bound");
  eval->add_option("--p", b_p);
  eval->add_option("--K", b_K);
  eval->add_option("--modulus", b_type)->check(CLI::IsMember({"lp", "hanner", "p-uniform", "small-p"}));
  eval->add_option("--eps", b_eps);
  eval->add_option("--norm", b_norm);
  eval->add_option("--eta", b_eta, "defaults to u/4");
  eval->add_option("--lower", b_lower);
  eval->add_option("--lambda", b_lambda, "corollary bound for a (lambda, .)-fast family");
  eval->callback([&] {
    const auto m = modulus_from_args(b_type, b_p, b_K);
    const auto in = resolve_bound_inputs(m, b_norm, b_eps, b_eta, b_lower);
    if (b_lambda) {
      std::cout << corollary_bound(m, b_norm, b_eps, in.eta, *b_lambda, b_lower) << '\n';
    } else {
      std::cout << theorem_bound(in) << '\n';
    }
  });

  // verify
  auto* verify = app.add_subcommand("verify", "verify the bounds on a configured experiment");
  verify->require_subcommand(1);
  std::string v_config;
  std::optional<std::string> v_out;
  auto* vmain = verify->add_subcommand("main", "at-distance count against the theorem bound");
  vmain->add_option("--config", v_config)->required();
  vmain->add_option("--out", v_out);
  vmain->callback([&] {
    auto c = config_from_json(read_json(v_config));
    const auto t = c.family.type == FamilySpec::Type::kRefined ? FamilySpec::Type::kStandard : c.family.type;
    code = run_config(v_config, v_out, t);
  });
  auto* vcor = verify->add_subcommand("corollary", "plain count on a refined fast family");
  vcor->add_option("--config", v_config)->required();
  vcor->add_option("--out", v_out);
  vcor->callback([&] { code = run_config(v_config, v_out, FamilySpec::Type::kRefined); });

  // run
  std::string r_config;
  std::optional<std::string> r_out;
  auto* run = app.add_subcommand("run", "run an experiment config and write its artifacts");
  run->add_option("--config", r_config)->required();
  run->add_option("--out", r_out, "output directory (overrides the config)");
  run->callback([&] { code = run_config(r_config, r_out, std::nullopt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return code;
}
