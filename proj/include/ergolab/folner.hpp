#pragma once

#include "ergolab/group.hpp"
#include "ergolab/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ergolab {

enum class Provenance { kStandardBox, kGreedy, kRefined, kExplicit };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

// One set of a family. Box terms are kept symbolic (radius only) and are
// materialized on demand; explicit terms own their elements.
struct FolnerTerm {
  std::int64_t size = 0;
  std::optional<std::int64_t> box_radius;
  std::shared_ptr<const ElementSet> elements;
};

// Indexed family F_1, ..., F_length of finite nonempty subsets of a group.
// Indices are 1-based; there is no F_0.
class FolnerFamily {
 public:
  // F_n = group.box(n) for n = 1..n_max, generated lazily so n_max may be
  // far larger than anything that could be materialized.
  static FolnerFamily standard(const Group& group, std::int64_t n_max);
  static FolnerFamily from_boxes(const Group& group, std::vector<std::int64_t> radii, Provenance provenance);
  static FolnerFamily from_sets(const Group& group, std::vector<ElementSet> sets,
                                Provenance provenance = Provenance::kExplicit);

  const Group& group() const noexcept { return group_; }
  Provenance provenance() const noexcept { return provenance_; }
  std::int64_t length() const noexcept { return length_; }

  FolnerTerm term(std::int64_t n) const;
  std::int64_t size(std::int64_t n) const { return term(n).size; }
  std::optional<std::int64_t> box_radius(std::int64_t n) const { return term(n).box_radius; }
  // Materialized F_n. Throws StructuralError for boxes above the
  // materialization limit.
  ElementSet elements(std::int64_t n) const;

  // Radii of box terms on a lattice; closed-form ratios apply.
  bool is_lattice_box(std::int64_t n) const;
  bool is_standard_lattice() const noexcept {
    return provenance_ == Provenance::kStandardBox && group_.is_lattice();
  }

  static constexpr std::int64_t kMaterializeLimit = 50'000'000;

 private:
  FolnerFamily(Group group, Provenance provenance, std::int64_t length)
      : group_(std::move(group)), provenance_(provenance), length_(length) {}
  void require_index(std::int64_t n) const;

  Group group_;
  Provenance provenance_;
  std::int64_t length_;
  std::vector<FolnerTerm> terms_;  // empty for standard families
};

// |F_n Δ g F_n| / |F_n| by translating, taking the symmetric difference and
// counting.
Rational folner_ratio(const FolnerFamily& family, std::int64_t n, const GroupElement& g);

// |B Δ gB| for the lattice box B = [-r, r]^d:
// 2 (|B| - prod_i max(0, 2r + 1 - |g_i|)).
std::int64_t lattice_box_difference(std::int64_t radius, const GroupElement& g);

// Largest |F_m Δ g F_m| over g in `generators` (the elements of a term), and
// an element attaining it. Box terms on lattices use the closed form; the
// corner of a generating box attains the maximum.
struct MaxDifference {
  std::int64_t difference = 0;
  std::int64_t size = 1;
  GroupElement witness;
  Rational ratio() const { return Rational(difference) / Rational(size); }
};
MaxDifference max_difference(const FolnerFamily& family, std::int64_t m, const FolnerTerm& generators);

enum class ModulusKind { kAnalytic, kEmpirical };
std::string to_string(ModulusKind k);

// beta(n, eps) for one n.
struct ModulusValue {
  std::int64_t n = 0;
  std::int64_t beta = 0;
  ModulusKind kind = ModulusKind::kEmpirical;
  // Window end for empirical values; absent for analytic ones, which hold for
  // every m >= beta.
  std::optional<std::int64_t> certified_up_to;
};

// Analytic for standard lattice boxes (m_max is then only a sanity bound on
// the caller's window and is not used to truncate). Otherwise the least N
// with the ratio condition holding for every m in [N, m_max]; throws
// ModulusNotFound when no such N exists.
ModulusValue convergence_modulus(const FolnerFamily& family, std::int64_t n, const Rational& eps,
                                 std::int64_t m_max);

class ModulusTable {
 public:
  ModulusTable(Rational eps, ModulusKind kind, std::optional<std::int64_t> certified_up_to)
      : eps_(std::move(eps)), kind_(kind), certified_up_to_(certified_up_to) {}

  const Rational& epsilon() const noexcept { return eps_; }
  ModulusKind kind() const noexcept { return kind_; }
  std::optional<std::int64_t> certified_up_to() const noexcept { return certified_up_to_; }

  // nullopt value: no N exists inside the certified window.
  void set(std::int64_t n, std::optional<std::int64_t> beta) { entries_[n] = beta; }
  bool has(std::int64_t n) const { return entries_.contains(n); }
  std::optional<std::int64_t> beta(std::int64_t n) const;
  const std::map<std::int64_t, std::optional<std::int64_t>>& entries() const noexcept { return entries_; }

  // Whether the table covers [1, window]: an analytic table always does, an
  // empirical one iff certified_up_to >= window.
  bool certifies(std::int64_t window) const noexcept;

 private:
  Rational eps_;
  ModulusKind kind_;
  std::optional<std::int64_t> certified_up_to_;
  std::map<std::int64_t, std::optional<std::int64_t>> entries_;
};

// Entries for n = 1..n_hi. Indices where no modulus exists in the window are
// stored as absent values instead of failing.
ModulusTable modulus_table(const FolnerFamily& family, const Rational& eps, std::int64_t n_hi,
                           std::int64_t m_max);

// Running maximum over n; an absent value absorbs everything after it.
// Requires entries for every n in 1..max key.
ModulusTable envelope(const ModulusTable& table);

// Greedy computable construction: F_1 = {g_1}; F~_n is the first candidate
// F_{n-1} ∪ box(r), r = 0, 1, 2, ..., with |F~ Δ gF~| < |F~|/n for every g
// in F_{n-1}; F_n = F~_n ∪ {g_n}. At most search_budget radii are tried per
// stage before BudgetExhausted.
FolnerFamily greedy_folner(const Group& group, std::int64_t n_max, std::int64_t search_budget);

struct RatioViolation {
  std::int64_t n = 0;
  std::int64_t m = 0;
  GroupElement g;
  Rational ratio;
};

struct CheckReport {
  bool pass = true;
  std::optional<RatioViolation> first_violation;
};

// For every n in [n_lo, n_hi], every m in [beta(n), window] and every g in
// F_n: ratio < eps. beta returning nullopt skips n.
CheckReport check_modulus(const FolnerFamily& family,
                          const std::function<std::optional<std::int64_t>(std::int64_t)>& beta,
                          const Rational& eps, std::int64_t n_lo, std::int64_t n_hi, std::int64_t window);

// (lambda, eps)-fast over the window: every n, every m in [n + lambda,
// window], every g in F_n.
CheckReport check_fast(const FolnerFamily& family, std::int64_t lambda, const Rational& eps,
                       std::int64_t window);

// For each n, check that every g in F_{n-1} has ratio < 3/n in F_n.
CheckReport check_greedy_stage_bound(const FolnerFamily& family);

struct Refinement {
  FolnerFamily family;
  std::vector<std::int64_t> source_index;  // n_1 < n_2 < ...
};

// (1, eps)-fast subsequence. With max_terms, throws RefinementExhausted if the
// source runs out first; without it, refines through the whole source.
Refinement fast_refinement(const FolnerFamily& family, const Rational& eps,
                           std::optional<std::int64_t> max_terms = std::nullopt);

}  // namespace ergolab
