#include "ergolab/folner.hpp"

#include "ergolab/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace ergolab {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kStandardBox: return "standard-box";
    case Provenance::kGreedy: return "greedy-constructed";
    case Provenance::kRefined: return "refined";
    case Provenance::kExplicit: return "explicit";
  }
  return "explicit";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "standard-box") return Provenance::kStandardBox;
  if (s == "greedy-constructed") return Provenance::kGreedy;
  if (s == "refined") return Provenance::kRefined;
  if (s == "explicit") return Provenance::kExplicit;
  throw StructuralError("unknown family provenance '" + s + "'");
}

std::string to_string(ModulusKind k) { return k == ModulusKind::kAnalytic ? "analytic" : "empirical"; }

FolnerFamily FolnerFamily::standard(const Group& group, std::int64_t n_max) {
  if (n_max < 1) throw DomainError("standard_family: n_max must be >= 1");
  group.box_size(n_max);  // overflow check on the largest term
  return FolnerFamily(group, Provenance::kStandardBox, n_max);
}

FolnerFamily FolnerFamily::from_boxes(const Group& group, std::vector<std::int64_t> radii, Provenance provenance) {
  if (radii.empty()) throw StructuralError("family needs at least one set");
  FolnerFamily f(group, provenance, static_cast<std::int64_t>(radii.size()));
  f.terms_.reserve(radii.size());
  for (std::int64_t r : radii) f.terms_.push_back(FolnerTerm{group.box_size(r), r, nullptr});
  return f;
}

FolnerFamily FolnerFamily::from_sets(const Group& group, std::vector<ElementSet> sets, Provenance provenance) {
  if (sets.empty()) throw StructuralError("family needs at least one set");
  FolnerFamily f(group, provenance, static_cast<std::int64_t>(sets.size()));
  f.terms_.reserve(sets.size());
  for (auto& s : sets) {
    s = make_set(std::move(s));
    if (s.empty()) throw StructuralError("Folner sets must be nonempty");
    for (const auto& g : s) {
      if (!group.contains(g)) throw StructuralError("element " + to_string(g) + " is not in group " + group.name());
    }
    const auto size = static_cast<std::int64_t>(s.size());
    f.terms_.push_back(FolnerTerm{size, std::nullopt, std::make_shared<const ElementSet>(std::move(s))});
  }
  return f;
}

void FolnerFamily::require_index(std::int64_t n) const {
  if (n < 1 || n > length_)
    throw StructuralError("family index " + std::to_string(n) + " outside [1, " + std::to_string(length_) + "]");
}

FolnerTerm FolnerFamily::term(std::int64_t n) const {
  require_index(n);
  if (terms_.empty()) return FolnerTerm{group_.box_size(n), n, nullptr};
  return terms_[static_cast<std::size_t>(n - 1)];
}

bool FolnerFamily::is_lattice_box(std::int64_t n) const {
  return group_.is_lattice() && term(n).box_radius.has_value();
}

namespace {

ElementSet materialize(const Group& group, const FolnerTerm& t) {
  if (t.elements) return *t.elements;
  if (t.size > FolnerFamily::kMaterializeLimit)
    throw StructuralError("set of size " + std::to_string(t.size) + " is too large to materialize");
  return group.box(*t.box_radius);
}

// true iff |a Δ b| >= cap; stops as soon as the count reaches cap.
bool difference_reaches(const ElementSet& a, const ElementSet& b, std::int64_t cap) {
  std::int64_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++i;
      ++j;
      continue;
    }
    if (++count >= cap) return true;
  }
  count += static_cast<std::int64_t>(a.end() - i) + static_cast<std::int64_t>(b.end() - j);
  return count >= cap;
}

bool ratio_ok(std::int64_t difference, std::int64_t size, const Rational& eps) {
  return ratio_less(difference, size, eps);
}

GroupElement corner(const Group& group, std::int64_t radius) {
  GroupElement g = group.identity();
  for (int i = 0; i < group.rank(); ++i) g.coords[i] = radius;
  return g;
}

}  // namespace

ElementSet FolnerFamily::elements(std::int64_t n) const { return materialize(group_, term(n)); }

Rational folner_ratio(const FolnerFamily& family, std::int64_t n, const GroupElement& g) {
  const ElementSet f = family.elements(n);
  const ElementSet gf = translate(family.group(), g, f);
  return Rational(symmetric_difference_size(f, gf)) / Rational(static_cast<std::int64_t>(f.size()));
}

std::int64_t lattice_box_difference(std::int64_t radius, const GroupElement& g) {
  if (g.kind != GroupKind::kLattice) throw StructuralError("closed-form box ratio needs a lattice element");
  const std::int64_t side = checked::add(checked::mul(2, radius), 1);
  std::int64_t size = 1;
  std::int64_t overlap = 1;
  for (std::size_t i = 0; i < g.rank; ++i) {
    const std::int64_t k = g.coords[i] < 0 ? checked::neg(g.coords[i]) : g.coords[i];
    size = checked::mul(size, side);
    overlap = checked::mul(overlap, std::max<std::int64_t>(0, side - k));
  }
  return checked::mul(2, size - overlap);
}

namespace {

using Run = std::pair<std::int64_t, std::int64_t>;

// Maximal blocks of consecutive integers in a sorted subset of Z.
std::vector<Run> integer_runs(const ElementSet& set) {
  std::vector<Run> runs;
  for (const auto& g : set) {
    const std::int64_t v = g.coords[0];
    if (!runs.empty() && runs.back().second + 1 == v) {
      runs.back().second = v;
    } else {
      runs.emplace_back(v, v);
    }
  }
  return runs;
}

// |F ∩ (k + F)| with both sides given as runs.
std::int64_t shifted_overlap(const std::vector<Run>& runs, std::int64_t k) {
  std::int64_t total = 0;
  std::size_t j = 0;
  for (const auto& [lo, hi] : runs) {
    const std::int64_t a = checked::add(lo, k), b = checked::add(hi, k);
    while (j < runs.size() && runs[j].second < a) ++j;
    for (std::size_t i = j; i < runs.size() && runs[i].first <= b; ++i) {
      total += std::min(b, runs[i].second) - std::max(a, runs[i].first) + 1;
    }
  }
  return total;
}

std::vector<Run> union_with_interval(const std::vector<Run>& runs, std::int64_t lo, std::int64_t hi) {
  std::vector<Run> out;
  bool placed = false;
  auto push = [&out](Run r) {
    if (!out.empty() && out.back().second + 1 >= r.first) {
      out.back().second = std::max(out.back().second, r.second);
    } else {
      out.push_back(r);
    }
  };
  for (const auto& run : runs) {
    if (!placed && lo <= run.first) {
      push({lo, hi});
      placed = true;
    }
    push(run);
  }
  if (!placed) push({lo, hi});
  return out;
}

}  // namespace

MaxDifference max_difference(const FolnerFamily& family, std::int64_t m, const FolnerTerm& generators) {
  const Group& group = family.group();
  const FolnerTerm target = family.term(m);
  MaxDifference best;
  best.size = target.size;
  best.witness = group.identity();
  if (family.is_lattice_box(m)) {
    const std::int64_t radius = *target.box_radius;
    if (generators.box_radius && !generators.elements) {
      best.witness = corner(group, *generators.box_radius);
      best.difference = lattice_box_difference(radius, best.witness);
      return best;
    }
    for (const auto& g : *generators.elements) {
      const std::int64_t d = lattice_box_difference(radius, g);
      if (d > best.difference) {
        best.difference = d;
        best.witness = g;
      }
    }
    return best;
  }
  const ElementSet f = materialize(group, target);
  const ElementSet gens = materialize(group, generators);
  if (group.is_lattice() && group.rank() == 1) {
    const auto runs = integer_runs(f);
    for (const auto& g : gens) {
      const std::int64_t d = 2 * (target.size - shifted_overlap(runs, g.coords[0]));
      if (d > best.difference) {
        best.difference = d;
        best.witness = g;
      }
    }
    return best;
  }
  for (const auto& g : gens) {
    const std::int64_t d = symmetric_difference_size(f, translate(group, g, f));
    if (d > best.difference) {
      best.difference = d;
      best.witness = g;
    }
  }
  return best;
}

namespace {

std::int64_t reach(const GroupElement& g) {
  std::int64_t r = 0;
  for (auto c : g.view()) r = std::max(r, c < 0 ? -c : c);
  return r;
}

// Some g in `generators` whose ratio on F_m is >= eps, or nullopt. Outside
// the closed-form cases this stops at the first such g instead of taking the
// maximum, trying far-out elements first.
std::optional<MaxDifference> find_violation(const FolnerFamily& family, std::int64_t m,
                                            const FolnerTerm& generators, const Rational& eps) {
  const Group& group = family.group();
  if (family.is_lattice_box(m) || (group.is_lattice() && group.rank() == 1)) {
    MaxDifference md = max_difference(family, m, generators);
    if (ratio_ok(md.difference, md.size, eps)) return std::nullopt;
    return md;
  }
  const FolnerTerm target = family.term(m);
  const Rational threshold = eps * target.size;
  if (threshold > 2 * target.size) return std::nullopt;
  const BigInt num = boost::multiprecision::numerator(threshold);
  const BigInt den = boost::multiprecision::denominator(threshold);
  const auto cap = static_cast<std::int64_t>((num + den - 1) / den);
  const ElementSet f = materialize(group, target);
  ElementSet gens = materialize(group, generators);
  std::stable_sort(gens.begin(), gens.end(),
                   [](const GroupElement& a, const GroupElement& b) { return reach(a) > reach(b); });
  for (const auto& g : gens) {
    const ElementSet moved = translate(group, g, f);
    if (difference_reaches(f, moved, cap)) {
      MaxDifference md;
      md.difference = symmetric_difference_size(f, moved);
      md.size = target.size;
      md.witness = g;
      return md;
    }
  }
  return std::nullopt;
}

ModulusValue analytic_modulus(const FolnerFamily& family, std::int64_t n, const Rational& eps) {
  const Group& group = family.group();
  const GroupElement g = corner(group, n);
  auto holds = [&](std::int64_t m) {
    return ratio_ok(lattice_box_difference(m, g), group.box_size(m), eps);
  };
  // The corner ratio is nonincreasing in m, so the first m that works
  // certifies every later one.
  std::int64_t hi = 1;
  while (!holds(hi)) hi = checked::mul(hi, 2);
  std::int64_t lo = hi / 2;  // holds(lo) is false or lo == 0
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return ModulusValue{n, hi, ModulusKind::kAnalytic, std::nullopt};
}

}  // namespace

ModulusValue convergence_modulus(const FolnerFamily& family, std::int64_t n, const Rational& eps,
                                 std::int64_t m_max) {
  if (eps <= 0) throw DomainError("convergence_modulus: eps must be positive");
  family.term(n);
  if (family.is_standard_lattice()) return analytic_modulus(family, n, eps);
  if (m_max < 1 || m_max > family.length())
    throw StructuralError("convergence_modulus: window end " + std::to_string(m_max) +
                          " outside the family (length " + std::to_string(family.length()) + ")");
  const FolnerTerm gens = family.term(n);
  std::int64_t last_violation = 0;
  for (std::int64_t m = m_max; m >= 1; --m) {
    if (find_violation(family, m, gens, eps)) {
      last_violation = m;
      break;
    }
  }
  if (last_violation == m_max) throw ModulusNotFound(n, m_max, last_violation);
  return ModulusValue{n, last_violation + 1, ModulusKind::kEmpirical, m_max};
}

std::optional<std::int64_t> ModulusTable::beta(std::int64_t n) const {
  auto it = entries_.find(n);
  if (it == entries_.end()) throw StructuralError("modulus table has no entry for n=" + std::to_string(n));
  return it->second;
}

bool ModulusTable::certifies(std::int64_t window) const noexcept {
  if (kind_ == ModulusKind::kAnalytic) return true;
  return certified_up_to_.has_value() && *certified_up_to_ >= window;
}

ModulusTable modulus_table(const FolnerFamily& family, const Rational& eps, std::int64_t n_hi, std::int64_t m_max) {
  if (n_hi < 1 || n_hi > family.length()) throw StructuralError("modulus_table: n range outside the family");
  const bool analytic = family.is_standard_lattice();
  ModulusTable table(eps, analytic ? ModulusKind::kAnalytic : ModulusKind::kEmpirical,
                     analytic ? std::nullopt : std::optional<std::int64_t>(m_max));
  for (std::int64_t n = 1; n <= n_hi; ++n) {
    try {
      table.set(n, convergence_modulus(family, n, eps, m_max).beta);
    } catch (const ModulusNotFound&) {
      table.set(n, std::nullopt);
    }
  }
  return table;
}

ModulusTable envelope(const ModulusTable& table) {
  ModulusTable out(table.epsilon(), table.kind(), table.certified_up_to());
  if (table.entries().empty()) return out;
  const std::int64_t last = table.entries().rbegin()->first;
  std::optional<std::int64_t> running = 0;
  for (std::int64_t n = 1; n <= last; ++n) {
    if (!table.has(n)) throw StructuralError("envelope: missing modulus entry for n=" + std::to_string(n));
    const auto b = table.beta(n);
    if (!running || !b) {
      running = std::nullopt;
    } else {
      running = std::max(*running, *b);
    }
    out.set(n, running);
  }
  return out;
}

FolnerFamily greedy_folner(const Group& group, std::int64_t n_max, std::int64_t search_budget) {
  if (n_max < 1) throw DomainError("greedy_folner: n_max must be >= 1");
  if (search_budget < 1) throw DomainError("greedy_folner: search_budget must be >= 1");
  const std::vector<GroupElement> enumeration = group.enumerate_prefix(static_cast<std::size_t>(n_max));
  std::vector<ElementSet> sets;
  sets.push_back(ElementSet{enumeration[0]});
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const ElementSet& prev = sets.back();
    // Far-out elements tend to break the condition first.
    std::vector<GroupElement> order(prev.begin(), prev.end());
    std::stable_sort(order.begin(), order.end(),
                     [&](const GroupElement& a, const GroupElement& b) { return reach(a) > reach(b); });

    std::optional<ElementSet> tilde;
    const bool on_integers = group.is_lattice() && group.rank() == 1;
    if (on_integers) {
      const auto prev_runs = integer_runs(prev);
      for (std::int64_t r = 0; r < search_budget && !tilde; ++r) {
        const auto runs = union_with_interval(prev_runs, -r, r);
        std::int64_t size = 0;
        for (const auto& [lo, hi] : runs) size += hi - lo + 1;
        bool ok = true;
        for (const auto& g : order) {
          if (n * 2 * (size - shifted_overlap(runs, g.coords[0])) >= size) {
            ok = false;
            break;
          }
        }
        if (ok) tilde = set_union(prev, group.box(r));
      }
    }
    std::size_t last_size = 0;
    for (std::int64_t r = 0; r < search_budget && !on_integers && !tilde; ++r) {
      ElementSet candidate = set_union(prev, group.box(r));
      // Candidates are nested, so an unchanged size means an unchanged set.
      if (candidate.size() == last_size) continue;
      last_size = candidate.size();
      const auto size = static_cast<std::int64_t>(candidate.size());
      const std::int64_t cap = (size + n - 1) / n;  // need |F Δ gF| < size / n
      bool ok = true;
      for (const auto& g : order) {
        if (difference_reaches(candidate, translate(group, g, candidate), cap)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        tilde = std::move(candidate);
        break;
      }
    }
    if (!tilde) throw BudgetExhausted(static_cast<std::size_t>(n), static_cast<std::size_t>(search_budget));
    sets.push_back(set_union(*tilde, ElementSet{enumeration[static_cast<std::size_t>(n - 1)]}));
  }
  return FolnerFamily::from_sets(group, std::move(sets), Provenance::kGreedy);
}

CheckReport check_modulus(const FolnerFamily& family,
                          const std::function<std::optional<std::int64_t>(std::int64_t)>& beta,
                          const Rational& eps, std::int64_t n_lo, std::int64_t n_hi, std::int64_t window) {
  if (window > family.length()) throw StructuralError("check_modulus: window exceeds the family");
  CheckReport report;
  for (std::int64_t n = std::max<std::int64_t>(n_lo, 1); n <= n_hi; ++n) {
    const auto b = beta(n);
    if (!b) continue;
    const FolnerTerm gens = family.term(n);
    for (std::int64_t m = std::max<std::int64_t>(*b, 1); m <= window; ++m) {
      if (const auto md = find_violation(family, m, gens, eps)) {
        report.pass = false;
        report.first_violation = RatioViolation{n, m, md->witness, md->ratio()};
        return report;
      }
    }
  }
  return report;
}

CheckReport check_fast(const FolnerFamily& family, std::int64_t lambda, const Rational& eps, std::int64_t window) {
  if (lambda < 1) throw DomainError("check_fast: lambda must be >= 1");
  return check_modulus(family, [lambda](std::int64_t n) { return std::optional<std::int64_t>(n + lambda); }, eps,
                       1, window, window);
}

CheckReport check_greedy_stage_bound(const FolnerFamily& family) {
  CheckReport report;
  for (std::int64_t n = 2; n <= family.length(); ++n) {
    if (const auto md = find_violation(family, n, family.term(n - 1), Rational(3, n))) {
      report.pass = false;
      report.first_violation = RatioViolation{n - 1, n, md->witness, md->ratio()};
      return report;
    }
  }
  return report;
}

namespace {

bool nested_lattice_boxes(const FolnerFamily& family) {
  if (!family.group().is_lattice()) return false;
  if (family.is_standard_lattice()) return true;
  std::int64_t prev = -1;
  for (std::int64_t n = 1; n <= family.length(); ++n) {
    const FolnerTerm t = family.term(n);
    if (!t.box_radius || t.elements || *t.box_radius < prev) return false;
    prev = *t.box_radius;
  }
  return true;
}

}  // namespace

Refinement fast_refinement(const FolnerFamily& family, const Rational& eps, std::optional<std::int64_t> max_terms) {
  if (eps <= 0) throw DomainError("fast_refinement: eps must be positive");
  if (max_terms && *max_terms < 1) throw DomainError("fast_refinement: max_terms must be >= 1");
  const Group& group = family.group();
  std::vector<std::int64_t> chosen{1};
  auto done = [&] { return max_terms && static_cast<std::int64_t>(chosen.size()) >= *max_terms; };

  if (nested_lattice_boxes(family)) {
    // The union of nested boxes is the largest one, whose corner maximizes
    // the ratio; the predicate is monotone in the index, so bisect.
    std::int64_t union_radius = *family.term(1).box_radius;
    while (!done()) {
      const GroupElement g = corner(group, union_radius);
      auto holds = [&](std::int64_t m) {
        const FolnerTerm t = family.term(m);
        return ratio_ok(lattice_box_difference(*t.box_radius, g), t.size, eps);
      };
      std::int64_t lo = chosen.back();
      std::int64_t hi = family.length();
      if (lo == hi || !holds(hi)) break;
      while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (holds(mid)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      chosen.push_back(hi);
      union_radius = std::max(union_radius, *family.term(hi).box_radius);
    }
    if (max_terms && !done()) throw RefinementExhausted(chosen.size(), static_cast<std::size_t>(*max_terms));
    std::vector<std::int64_t> radii;
    for (auto n : chosen) radii.push_back(*family.term(n).box_radius);
    return Refinement{FolnerFamily::from_boxes(group, std::move(radii), Provenance::kRefined), chosen};
  }

  ElementSet united = family.elements(1);
  std::int64_t next = 2;
  while (!done()) {
    FolnerTerm gens{static_cast<std::int64_t>(united.size()), std::nullopt,
                    std::make_shared<const ElementSet>(united)};
    std::optional<std::int64_t> found;
    for (; next <= family.length(); ++next) {
      const MaxDifference md = max_difference(family, next, gens);
      if (ratio_ok(md.difference, md.size, eps)) {
        found = next++;
        break;
      }
    }
    if (!found) break;
    chosen.push_back(*found);
    united = set_union(united, family.elements(*found));
  }
  if (max_terms && !done()) throw RefinementExhausted(chosen.size(), static_cast<std::size_t>(*max_terms));
  std::vector<ElementSet> sets;
  for (auto n : chosen) sets.push_back(family.elements(n));
  return Refinement{FolnerFamily::from_sets(group, std::move(sets), Provenance::kRefined), chosen};
}

}  // namespace ergolab
