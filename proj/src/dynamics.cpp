#include "ergolab/dynamics.hpp"

#include "ergolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ergolab {

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  const std::size_t n = images_.size();
  std::vector<bool> seen(n, false);
  for (auto v : images_) {
    if (v >= n || seen[v]) throw StructuralError("generator image is not a permutation of 0..M-1");
    seen[v] = true;
  }
  cycle_of_.assign(n, 0);
  position_.assign(n, 0);
  std::vector<bool> visited(n, false);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (visited[s]) continue;
    std::vector<std::uint32_t> cycle;
    for (std::uint32_t t = s; !visited[t]; t = images_[t]) {
      visited[t] = true;
      cycle_of_[t] = static_cast<std::uint32_t>(cycles_.size());
      position_[t] = static_cast<std::uint32_t>(cycle.size());
      cycle.push_back(t);
    }
    cycles_.push_back(std::move(cycle));
  }
}

Permutation Permutation::identity(std::size_t size) {
  std::vector<std::uint32_t> images(size);
  std::iota(images.begin(), images.end(), 0u);
  return Permutation(std::move(images));
}

std::uint32_t Permutation::power(std::uint32_t s, std::int64_t k) const {
  const auto& cycle = cycles_[cycle_of_[s]];
  const auto len = static_cast<std::int64_t>(cycle.size());
  std::int64_t j = (static_cast<std::int64_t>(position_[s]) + k % len) % len;
  if (j < 0) j += len;
  return cycle[static_cast<std::size_t>(j)];
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> inv(images_.size());
  for (std::uint32_t s = 0; s < images_.size(); ++s) inv[images_[s]] = s;
  return Permutation(std::move(inv));
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw StructuralError("composing permutations of different sizes");
  std::vector<std::uint32_t> images(a.size());
  for (std::uint32_t s = 0; s < images.size(); ++s) images[s] = a.images_[b.images_[s]];
  return Permutation(std::move(images));
}

FiniteMeasureSystem::FiniteMeasureSystem(Group group, std::vector<Rational> weights,
                                         std::vector<Permutation> generators)
    : group_(std::move(group)), weights_(std::move(weights)), generators_(std::move(generators)) {
  if (weights_.empty()) throw StructuralError("measure system needs at least one point");
  for (const auto& w : weights_) {
    if (w <= 0) throw DataError("point masses must be positive");
  }
  if (static_cast<int>(generators_.size()) != group_.rank())
    throw StructuralError("group " + group_.name() + " needs " + std::to_string(group_.rank()) +
                          " generator images, got " + std::to_string(generators_.size()));
  for (const auto& g : generators_) {
    if (g.size() != weights_.size()) throw StructuralError("generator image length differs from the point count");
  }
  if (group_.is_lattice()) {
    for (std::size_t i = 0; i < generators_.size(); ++i)
      for (std::size_t j = i + 1; j < generators_.size(); ++j)
        if (!(generators_[i] * generators_[j] == generators_[j] * generators_[i]))
          throw StructuralError("lattice generators must commute for the action to be a homomorphism");
  } else {
    const auto& x = generators_[0];
    const auto& y = generators_[1];
    const auto& z = generators_[2];
    if (!(z == x * y * x.inverse() * y.inverse()))
      throw StructuralError("H3 action needs Z = X Y X^-1 Y^-1");
    if (!(z * x == x * z) || !(z * y == y * z)) throw StructuralError("H3 action needs Z central");
  }
  for (const auto& g : generators_) {
    for (std::uint32_t s = 0; s < weights_.size(); ++s) {
      if (weights_[g(s)] != weights_[s]) throw StructuralError("action is not measure-preserving");
    }
  }
  weights_d_.reserve(weights_.size());
  for (const auto& w : weights_) weights_d_.push_back(to_double(w));
}

FiniteMeasureSystem FiniteMeasureSystem::from_named(
    Group group, std::vector<Rational> weights, const std::map<std::string, std::vector<std::uint32_t>>& generators) {
  std::vector<Permutation> perms;
  for (const auto& name : group.generator_names()) {
    auto it = generators.find(name);
    if (it == generators.end()) throw StructuralError("missing generator image '" + name + "' for " + group.name());
    perms.emplace_back(it->second);
  }
  if (generators.size() != perms.size()) throw StructuralError("unexpected generator names for " + group.name());
  return FiniteMeasureSystem(std::move(group), std::move(weights), std::move(perms));
}

Rational FiniteMeasureSystem::total_mass() const {
  Rational total = 0;
  for (const auto& w : weights_) total += w;
  return total;
}

std::uint32_t FiniteMeasureSystem::act(const GroupElement& g, std::uint32_t s) const {
  if (!group_.contains(g)) throw StructuralError("element " + to_string(g) + " is not in group " + group_.name());
  if (group_.is_lattice()) {
    for (std::size_t i = 0; i < generators_.size(); ++i) s = generators_[i].power(s, g.coords[i]);
    return s;
  }
  const std::int64_t central = checked::sub(g.coords[2], checked::mul(g.coords[0], g.coords[1]));
  s = generators_[1].power(s, g.coords[1]);
  s = generators_[0].power(s, g.coords[0]);
  return generators_[2].power(s, central);
}

Permutation FiniteMeasureSystem::action(const GroupElement& g) const {
  std::vector<std::uint32_t> images(size());
  for (std::uint32_t s = 0; s < images.size(); ++s) images[s] = act(g, s);
  return Permutation(std::move(images));
}

bool FiniteMeasureSystem::homomorphism_holds(const GroupElement& g, const GroupElement& h) const {
  return action(group_.multiply(g, h)) == action(g) * action(h);
}

bool FiniteMeasureSystem::preserves_measure(const GroupElement& g) const {
  for (std::uint32_t s = 0; s < size(); ++s) {
    if (weights_[act(g, s)] != weights_[s]) return false;
  }
  return true;
}

std::vector<std::vector<std::uint32_t>> FiniteMeasureSystem::orbits() const {
  const std::size_t n = size();
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t s) {
    while (parent[s] != s) s = parent[s] = parent[parent[s]];
    return s;
  };
  for (const auto& g : generators_) {
    for (std::uint32_t s = 0; s < n; ++s) {
      const auto a = find(s), b = find(g(s));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<std::uint32_t, std::vector<std::uint32_t>> by_root;
  for (std::uint32_t s = 0; s < n; ++s) by_root[find(s)].push_back(s);
  std::vector<std::vector<std::uint32_t>> out;
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  return out;
}

namespace {

std::vector<Rational> uniform(std::size_t n) { return std::vector<Rational>(n, Rational(1, static_cast<long>(n))); }

void require_observable(const FiniteMeasureSystem& system, const Observable& f) {
  if (f.values.size() != system.size())
    throw StructuralError("observable has " + std::to_string(f.values.size()) + " values, system has " +
                          std::to_string(system.size()) + " points");
  if (!(f.p > 1.0) || !std::isfinite(f.p)) throw DomainError("observable exponent p must lie in (1, inf)");
  for (double v : f.values) {
    if (!std::isfinite(v)) throw DataError("observable has a non-finite value");
  }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// h -> (2r+1)^-1 sum_{|k| <= r} h o sigma^k, cycle by cycle.
std::vector<double> axis_average(const Permutation& sigma, std::int64_t r, const std::vector<double>& h) {
  std::vector<double> out(h.size(), 0.0);
  const double width = static_cast<double>(2 * r + 1);
  std::map<std::size_t, std::vector<std::int64_t>> counts_by_length;
  for (const auto& cycle : sigma.cycles()) {
    const std::size_t len = cycle.size();
    auto& counts = counts_by_length[len];
    if (counts.empty()) {
      const auto L = static_cast<std::int64_t>(len);
      counts.resize(len);
      for (std::int64_t j = 0; j < L; ++j) counts[j] = floor_div(r - j, L) - floor_div(-r - 1 - j, L);
    }
    for (std::size_t p = 0; p < len; ++p) {
      double sum = 0.0;
      for (std::size_t j = 0; j < len; ++j) sum += static_cast<double>(counts[j]) * h[cycle[(p + j) % len]];
      out[cycle[p]] = sum / width;
    }
  }
  return out;
}

}  // namespace

FiniteMeasureSystem rotation_system(std::uint32_t N) {
  if (N == 0) throw StructuralError("rotation needs N >= 1");
  std::vector<std::uint32_t> shift(N);
  for (std::uint32_t s = 0; s < N; ++s) shift[s] = (s + 1) % N;
  return FiniteMeasureSystem(Group::integers(), uniform(N), {Permutation(std::move(shift))});
}

FiniteMeasureSystem torus_translation_system(std::uint32_t N, int d) {
  if (N == 0) throw StructuralError("torus needs N >= 1");
  const Group group = Group::lattice(d);
  std::size_t M = 1;
  for (int i = 0; i < d; ++i) M *= N;
  std::vector<Permutation> gens;
  std::size_t stride = 1;
  for (int i = d - 1; i >= 0; --i) {
    std::vector<std::uint32_t> images(M);
    for (std::size_t s = 0; s < M; ++s) {
      const std::size_t digit = (s / stride) % N;
      images[s] = static_cast<std::uint32_t>(s - digit * stride + ((digit + 1) % N) * stride);
    }
    gens.emplace_back(std::move(images));
    stride *= N;
  }
  std::reverse(gens.begin(), gens.end());  // e_1 moves the leading coordinate
  return FiniteMeasureSystem(group, uniform(M), std::move(gens));
}

FiniteMeasureSystem heisenberg_abelianized_system(std::uint32_t N) {
  const FiniteMeasureSystem torus = torus_translation_system(N, 2);
  std::vector<Permutation> gens = torus.generators();
  gens.push_back(Permutation::identity(torus.size()));
  return FiniteMeasureSystem(Group::heisenberg(), torus.weights(), std::move(gens));
}

FiniteMeasureSystem heisenberg_mod_system(std::uint32_t N) {
  if (N == 0) throw StructuralError("Heisenberg quotient needs N >= 1");
  const std::size_t M = static_cast<std::size_t>(N) * N * N;
  auto index = [N](std::uint32_t a, std::uint32_t b, std::uint32_t c) { return (a * N + b) * N + c; };
  std::vector<std::uint32_t> x(M), y(M), z(M);
  for (std::uint32_t a = 0; a < N; ++a)
    for (std::uint32_t b = 0; b < N; ++b)
      for (std::uint32_t c = 0; c < N; ++c) {
        const auto s = index(a, b, c);
        // left multiplication: x (a,b,c) = (a+1, b, c+b), y (a,b,c) = (a, b+1, c)
        x[s] = index((a + 1) % N, b, (c + b) % N);
        y[s] = index(a, (b + 1) % N, c);
        z[s] = index(a, b, (c + 1) % N);
      }
  return FiniteMeasureSystem(Group::heisenberg(), uniform(M),
                             {Permutation(std::move(x)), Permutation(std::move(y)), Permutation(std::move(z))});
}

double lp_norm(const FiniteMeasureSystem& system, const Observable& f) {
  require_observable(system, f);
  const auto& mu = system.weights_double();
  double sum = 0.0;
  for (std::size_t s = 0; s < f.values.size(); ++s) sum += mu[s] * std::pow(std::abs(f.values[s]), f.p);
  return f.p == 2.0 ? std::sqrt(sum) : std::pow(sum, 1.0 / f.p);
}

double lp_distance(const FiniteMeasureSystem& system, const Observable& f, const Observable& h) {
  if (f.p != h.p) throw StructuralError("observables use different exponents");
  Observable diff{f.values, f.p};
  if (h.values.size() != diff.values.size()) throw StructuralError("observable length mismatch");
  for (std::size_t s = 0; s < diff.values.size(); ++s) diff.values[s] -= h.values[s];
  return lp_norm(system, diff);
}

Observable koopman_apply(const FiniteMeasureSystem& system, const GroupElement& g, const Observable& f) {
  require_observable(system, f);
  const GroupElement g_inv = system.group().inverse(g);
  Observable out{std::vector<double>(f.values.size()), f.p};
  for (std::uint32_t s = 0; s < out.values.size(); ++s) out.values[s] = f.values[system.act(g_inv, s)];
  return out;
}

Observable ergodic_average(const FiniteMeasureSystem& system, const FolnerFamily& family, std::int64_t n,
                           const Observable& f, AveragePath path) {
  require_observable(system, f);
  if (!(family.group() == system.group())) throw StructuralError("family and system act through different groups");
  const FolnerTerm term = family.term(n);
  if (path == AveragePath::kAuto && family.is_lattice_box(n)) {
    std::vector<double> h = f.values;
    for (const auto& sigma : system.generators()) h = axis_average(sigma, *term.box_radius, h);
    return Observable{std::move(h), f.p};
  }
  const ElementSet elements = family.elements(n);
  if (elements.empty()) throw StructuralError("ergodic average over an empty set");
  std::vector<double> sum(f.values.size(), 0.0);
  for (const auto& g : elements) {
    // (pi(g^-1) f)(s) = f(g s)
    for (std::uint32_t s = 0; s < sum.size(); ++s) sum[s] += f.values[system.act(g, s)];
  }
  const auto count = static_cast<double>(elements.size());
  for (auto& v : sum) v /= count;
  return Observable{std::move(sum), f.p};
}

double average_defect(const FiniteMeasureSystem& system, const FolnerFamily& family, std::int64_t N,
                      std::int64_t K, const Observable& f) {
  const Observable a_k = ergodic_average(system, family, K, f);
  const Observable a_k_a_n = ergodic_average(system, family, K, ergodic_average(system, family, N, f));
  return lp_distance(system, a_k, a_k_a_n);
}

std::vector<Observable> average_sequence(const FiniteMeasureSystem& system, const FolnerFamily& family,
                                         const Observable& f, std::int64_t window) {
  if (window < 1 || window > family.length())
    throw StructuralError("average window " + std::to_string(window) + " outside the family (length " +
                          std::to_string(family.length()) + ")");
  std::vector<Observable> out;
  out.reserve(static_cast<std::size_t>(window));
  for (std::int64_t n = 1; n <= window; ++n) out.push_back(ergodic_average(system, family, n, f));
  return out;
}

Observable invariant_projection(const FiniteMeasureSystem& system, const Observable& f) {
  require_observable(system, f);
  Observable out{std::vector<double>(f.values.size()), f.p};
  for (const auto& orbit : system.orbits()) {
    Rational mass = 0, integral = 0;
    for (auto s : orbit) {
      mass += system.weights()[s];
      integral += system.weights()[s] * rational_from_double(f.values[s]);
    }
    const double mean = to_double(integral / mass);
    for (auto s : orbit) out.values[s] = mean;
  }
  return out;
}

}  // namespace ergolab
