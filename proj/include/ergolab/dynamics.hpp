#pragma once

#include "ergolab/folner.hpp"
#include "ergolab/group.hpp"
#include "ergolab/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ergolab {

// Bijection of {0, ..., M-1} with its cycle decomposition, so any integer
// power is evaluated in O(1) per point.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> images);
  static Permutation identity(std::size_t size);

  std::size_t size() const noexcept { return images_.size(); }
  const std::vector<std::uint32_t>& images() const noexcept { return images_; }
  std::uint32_t operator()(std::uint32_t s) const { return images_[s]; }
  // sigma^k(s) for any integer k.
  std::uint32_t power(std::uint32_t s, std::int64_t k) const;
  std::uint32_t cycle_length(std::uint32_t s) const { return static_cast<std::uint32_t>(cycles_[cycle_of_[s]].size()); }

  Permutation inverse() const;
  // (a * b)(s) = a(b(s)).
  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend bool operator==(const Permutation& a, const Permutation& b) { return a.images_ == b.images_; }

  const std::vector<std::vector<std::uint32_t>>& cycles() const noexcept { return cycles_; }
  std::uint32_t cycle_of(std::uint32_t s) const { return cycle_of_[s]; }
  std::uint32_t position(std::uint32_t s) const { return position_[s]; }

 private:
  std::vector<std::uint32_t> images_;
  std::vector<std::vector<std::uint32_t>> cycles_;
  std::vector<std::uint32_t> cycle_of_;
  std::vector<std::uint32_t> position_;
};

// A finite measure space {0..M-1} with positive rational point masses and a
// measure-preserving action of a group, given by the images of the standard
// generators. Z^d: act(k) = s_1^k_1 ... s_d^k_d. H3: act(a,b,c) =
// Z^(c - ab) X^a Y^b, which is a homomorphism iff Z = X Y X^-1 Y^-1 and Z
// commutes with X and Y.
class FiniteMeasureSystem {
 public:
  FiniteMeasureSystem(Group group, std::vector<Rational> weights, std::vector<Permutation> generators);
  // Generators keyed by Group::generator_names().
  static FiniteMeasureSystem from_named(Group group, std::vector<Rational> weights,
                                        const std::map<std::string, std::vector<std::uint32_t>>& generators);

  const Group& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  const std::vector<double>& weights_double() const noexcept { return weights_d_; }
  const std::vector<Permutation>& generators() const noexcept { return generators_; }
  Rational total_mass() const;

  // Image of point s under g.
  std::uint32_t act(const GroupElement& g, std::uint32_t s) const;
  Permutation action(const GroupElement& g) const;

  // act(gh) == act(g) act(h), compared as permutations.
  bool homomorphism_holds(const GroupElement& g, const GroupElement& h) const;
  // mu({act(g) s}) == mu({s}) for every s, exactly.
  bool preserves_measure(const GroupElement& g) const;

  // Orbits of the action, sorted by smallest point.
  std::vector<std::vector<std::uint32_t>> orbits() const;
  bool ergodic() const { return orbits().size() == 1; }

 private:
  Group group_;
  std::vector<Rational> weights_;
  std::vector<double> weights_d_;
  std::vector<Permutation> generators_;
};

// Z acting on Z/N by s -> s + 1 with uniform mass 1/N.
FiniteMeasureSystem rotation_system(std::uint32_t N);
// Z^d acting on (Z/N)^d by translation, uniform mass.
FiniteMeasureSystem torus_translation_system(std::uint32_t N, int d);
// H3 acting on (Z/N)^2 through (a,b,c) -> (a,b); the central generator is trivial.
FiniteMeasureSystem heisenberg_abelianized_system(std::uint32_t N);
// H3 acting on the Heisenberg group mod N by left multiplication.
FiniteMeasureSystem heisenberg_mod_system(std::uint32_t N);

struct Observable {
  std::vector<double> values;
  double p = 2.0;
};

double lp_norm(const FiniteMeasureSystem& system, const Observable& f);
// ||f - h||_p for observables on the same system.
double lp_distance(const FiniteMeasureSystem& system, const Observable& f, const Observable& h);

// pi(g) f = f o g^-1.
Observable koopman_apply(const FiniteMeasureSystem& system, const GroupElement& g, const Observable& f);

enum class AveragePath {
  kAuto,      // per-axis residue counts for lattice boxes, direct sum otherwise
  kDirect,    // sum over the materialized set in ascending element order
};

// A_n f = |F_n|^-1 sum_{g in F_n} pi(g^-1) f.
Observable ergodic_average(const FiniteMeasureSystem& system, const FolnerFamily& family, std::int64_t n,
                           const Observable& f, AveragePath path = AveragePath::kAuto);

// ||A_K f - A_K A_N f||_p.
double average_defect(const FiniteMeasureSystem& system, const FolnerFamily& family, std::int64_t N,
                      std::int64_t K, const Observable& f);

// A_1 f, ..., A_window f.
std::vector<Observable> average_sequence(const FiniteMeasureSystem& system, const FolnerFamily& family,
                                         const Observable& f, std::int64_t window);

// Conditional expectation onto invariant functions: the mass-weighted mean of
// f over each orbit. This is the norm limit of the averages.
Observable invariant_projection(const FiniteMeasureSystem& system, const Observable& f);

}  // namespace ergolab
