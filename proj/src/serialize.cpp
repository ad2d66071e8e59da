#include "ergolab/serialize.hpp"

#include "ergolab/errors.hpp"

#include <array>
#include <charconv>

namespace ergolab {

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw DataError("cannot format number");
  return std::string(buf.data(), end);
}

namespace {

Json element_to_json(const GroupElement& g) {
  Json arr = Json::array();
  for (auto c : g.view()) arr.push_back(c);
  return arr;
}

GroupElement element_from_json(const Group& group, const Json& j) {
  std::vector<std::int64_t> coords;
  for (const auto& c : j) coords.push_back(c.get<std::int64_t>());
  return group.element(coords);
}

Json optional_int(const std::optional<std::int64_t>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json family_to_json(const FolnerFamily& family, std::int64_t element_limit) {
  Json j;
  j["group"] = family.group().name();
  j["provenance"] = to_string(family.provenance());
  j["length"] = family.length();
  if (family.provenance() == Provenance::kStandardBox) {
    j["sets"] = Json::array();  // generated from the index
    return j;
  }
  Json sets = Json::array();
  for (std::int64_t n = 1; n <= family.length(); ++n) {
    const FolnerTerm t = family.term(n);
    Json s;
    s["index"] = n;
    s["size"] = t.size;
    if (t.box_radius) s["box_radius"] = *t.box_radius;
    if (t.elements || t.size <= element_limit) {
      Json elems = Json::array();
      for (const auto& g : family.elements(n)) elems.push_back(element_to_json(g));
      s["elements"] = std::move(elems);
    }
    sets.push_back(std::move(s));
  }
  j["sets"] = std::move(sets);
  return j;
}

FolnerFamily family_from_json(const Json& j) {
  const Group group = Group::from_name(j.at("group").get<std::string>());
  const Provenance provenance = provenance_from_string(j.at("provenance").get<std::string>());
  if (provenance == Provenance::kStandardBox) return FolnerFamily::standard(group, j.at("length").get<std::int64_t>());
  const auto& sets = j.at("sets");
  if (!sets.empty() && sets.front().contains("box_radius") && !sets.front().contains("elements")) {
    std::vector<std::int64_t> radii;
    for (const auto& s : sets) radii.push_back(s.at("box_radius").get<std::int64_t>());
    return FolnerFamily::from_boxes(group, std::move(radii), provenance);
  }
  std::vector<ElementSet> out;
  for (const auto& s : sets) {
    ElementSet set;
    for (const auto& e : s.at("elements")) set.push_back(element_from_json(group, e));
    out.push_back(std::move(set));
  }
  return FolnerFamily::from_sets(group, std::move(out), provenance);
}

Json modulus_table_to_json(const ModulusTable& table, const std::string& family_label) {
  Json j;
  j["family"] = family_label;
  j["epsilon"] = to_string(table.epsilon());
  j["kind"] = to_string(table.kind());
  j["certified_up_to"] = optional_int(table.certified_up_to());
  Json entries = Json::array();
  for (const auto& [n, beta] : table.entries()) entries.push_back(Json{{"n", n}, {"beta", optional_int(beta)}});
  j["entries"] = std::move(entries);
  return j;
}

ModulusTable modulus_table_from_json(const Json& j) {
  const ModulusKind kind = j.at("kind").get<std::string>() == "analytic" ? ModulusKind::kAnalytic
                                                                          : ModulusKind::kEmpirical;
  std::optional<std::int64_t> certified;
  if (!j.at("certified_up_to").is_null()) certified = j.at("certified_up_to").get<std::int64_t>();
  ModulusTable table(parse_rational(j.at("epsilon").get<std::string>()), kind, certified);
  for (const auto& e : j.at("entries")) {
    std::optional<std::int64_t> beta;
    if (!e.at("beta").is_null()) beta = e.at("beta").get<std::int64_t>();
    table.set(e.at("n").get<std::int64_t>(), beta);
  }
  return table;
}

Json report_to_json(const FluctuationReport& r) {
  Json j;
  j["mode"] = r.mode == ChainMode::kPlain ? "plain" : "at-distance";
  j["epsilon"] = r.inputs.eps;
  j["eta"] = r.inputs.eta;
  j["branch"] = r.degenerate ? "zero-vector" : to_string(r.inputs.branch);
  j["norm"] = r.inputs.norm;
  j["u"] = r.inputs.u;
  j["lower_bound"] = r.inputs.lower;
  if (r.lambda > 0) j["lambda"] = r.lambda;
  j["bound"] = r.bound;
  j["count"] = r.count;
  j["chain_length"] = r.chain_length;
  j["chain"] = r.chain;
  Json beta;
  beta["epsilon"] = r.beta_epsilon;
  if (r.mode == ChainMode::kAtDistance) {
    Json values = Json::array();
    for (const auto& b : r.beta_used) values.push_back(optional_int(b));
    beta["values"] = std::move(values);
  } else {
    beta["fast_lambda"] = r.lambda;
  }
  j["beta_used"] = std::move(beta);
  j["certified_window"] = r.certified_window ? Json(*r.certified_window) : Json("exact");
  j["window"] = r.window;
  j["verdict"] = r.verdict;
  return j;
}

FiniteMeasureSystem system_from_json(const Group& group, const Json& j) {
  const auto points = j.at("points").get<std::size_t>();
  std::vector<Rational> weights;
  if (j.contains("weights")) {
    for (const auto& w : j.at("weights")) {
      weights.push_back(w.is_string() ? parse_rational(w.get<std::string>()) : rational_from_double(w.get<double>()));
    }
  } else {
    weights.assign(points, Rational(1, static_cast<long>(points)));
  }
  if (weights.size() != points) throw StructuralError("system: weights length differs from points");
  std::map<std::string, std::vector<std::uint32_t>> gens;
  for (const auto& [name, images] : j.at("generators").items()) gens[name] = images.get<std::vector<std::uint32_t>>();
  return FiniteMeasureSystem::from_named(group, std::move(weights), gens);
}

Json system_to_json(const FiniteMeasureSystem& system) {
  Json j;
  j["points"] = system.size();
  Json weights = Json::array();
  for (const auto& w : system.weights()) weights.push_back(to_string(w));
  j["weights"] = std::move(weights);
  Json gens;
  const auto names = system.group().generator_names();
  for (std::size_t i = 0; i < names.size(); ++i) gens[names[i]] = system.generators()[i].images();
  j["generators"] = std::move(gens);
  return j;
}

ConvexityModulus convexity_from_json(const Json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "hanner") return ConvexityModulus::hanner(j.at("p").get<double>());
  if (type == "p-uniform") return ConvexityModulus::p_uniform(j.at("K").get<double>(), j.at("p").get<double>());
  if (type == "small-p") return ConvexityModulus::small_p(j.at("p").get<double>());
  throw StructuralError("unknown convexity modulus type '" + type + "'");
}

}  // namespace ergolab
