#include "ergolab/dynamics.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/experiment.hpp"

#include <doctest.h>

#include <cmath>

using namespace ergolab;

namespace {

Observable random_f(Rng& rng, std::size_t n, double p = 2) {
  Observable f{std::vector<double>(n), p};
  for (auto& v : f.values) v = rng.uniform(-1, 1);
  return f;
}

// (1/|F|) sum_{k in F} f(s + k mod N) written out by hand.
std::vector<double> rotation_average_oracle(const std::vector<double>& f, std::int64_t lo, std::int64_t hi) {
  const auto N = static_cast<std::int64_t>(f.size());
  std::vector<double> out(f.size());
  for (std::int64_t s = 0; s < N; ++s) {
    double sum = 0;
    for (std::int64_t k = lo; k <= hi; ++k) sum += f[static_cast<std::size_t>(((s + k) % N + N) % N)];
    out[static_cast<std::size_t>(s)] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace

TEST_CASE("permutations") {
  Permutation p({1, 2, 0, 4, 3});
  CHECK(p.cycles().size() == 2);
  CHECK(p.power(0, 3) == 0);
  CHECK(p.power(0, -1) == 2);
  CHECK(p.power(3, 7) == 4);
  CHECK(p * p.inverse() == Permutation::identity(5));
  CHECK_THROWS_AS(Permutation({0, 0, 1}), StructuralError);
}

TEST_CASE("shipped systems are exact homomorphic measure-preserving actions") {
  const FiniteMeasureSystem systems[] = {rotation_system(12), torus_translation_system(5, 2),
                                         heisenberg_abelianized_system(4), heisenberg_mod_system(3)};
  for (const auto& sys : systems) {
    const auto elems = sys.group().enumerate_prefix(25);
    for (const auto& g : elems) {
      CHECK(sys.preserves_measure(g));
      for (const auto& h : elems) CHECK(sys.homomorphism_holds(g, h));
    }
    CHECK(sys.action(sys.group().identity()) == Permutation::identity(sys.size()));
    CHECK(sys.total_mass() == 1);
  }
  CHECK(rotation_system(12).ergodic());
  CHECK(heisenberg_mod_system(3).ergodic());
}

TEST_CASE("system validation") {
  const Group z = Group::integers();
  CHECK_THROWS_AS(FiniteMeasureSystem(z, {Rational(1, 2), Rational(1, 2)}, {}), StructuralError);
  // Swapping points of unequal mass is not measure preserving.
  CHECK_THROWS(FiniteMeasureSystem(z, {Rational(1, 3), Rational(2, 3)}, {Permutation({1, 0})}));
  CHECK_THROWS(FiniteMeasureSystem(z, {Rational(0), Rational(1)}, {Permutation({0, 1})}));
  // Non-commuting generators for Z^2.
  const Group z2 = Group::lattice(2);
  std::vector<Rational> w(3, Rational(1, 3));
  CHECK_THROWS(FiniteMeasureSystem(z2, w, {Permutation({1, 0, 2}), Permutation({0, 2, 1})}));
}

TEST_CASE("koopman action") {
  const auto sys = rotation_system(4);
  const Group& z = sys.group();
  Observable f{{1, 0, 0, 0}, 2};
  CHECK(koopman_apply(sys, z.identity(), f).values == f.values);
  CHECK(koopman_apply(sys, z.element({1}), f).values == std::vector<double>{0, 1, 0, 0});
  CHECK_THROWS_AS(koopman_apply(sys, z.element({1}), Observable{{1, 2}, 2}), StructuralError);

  Rng rng(7);
  const auto hsys = heisenberg_mod_system(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = random_f(rng, hsys.size(), 1.5 + rng.uniform01() * 3);
    const auto elem = hsys.group().enumerate_prefix(30)[rng.below(30)];
    CHECK(lp_norm(hsys, koopman_apply(hsys, elem, g)) == doctest::Approx(lp_norm(hsys, g)).epsilon(1e-12));
  }
}

TEST_CASE("norms") {
  const auto sys = rotation_system(4);
  CHECK(lp_norm(sys, Observable{{0, 0, 0, 0}, 2}) == 0);
  CHECK(lp_norm(sys, Observable{{1, 1, 1, 1}, 3}) == doctest::Approx(1));
  CHECK(lp_norm(sys, Observable{{2, 0, 0, 0}, 2}) == doctest::Approx(1));
}

TEST_CASE("ergodic averages") {
  Rng rng(11);
  const auto sys = rotation_system(12);
  const auto f = random_f(rng, 12);
  const Group& z = sys.group();

  const auto one = FolnerFamily::from_sets(z, {ElementSet{z.identity()}});
  CHECK(ergodic_average(sys, one, 1, f).values == f.values);

  const auto c = Observable{std::vector<double>(12, 3.5), 2};
  const auto boxes = FolnerFamily::standard(z, 60);
  for (std::int64_t n : {1, 5, 40}) {
    for (double v : ergodic_average(sys, boxes, n, c).values) CHECK(v == doctest::Approx(3.5));
  }

  std::vector<ElementSet> full;
  for (int k = 1; k <= 2; ++k) {
    ElementSet s;
    for (int i = 0; i < 12 * k; ++i) s.push_back(z.element({i}));
    full.push_back(s);
  }
  const auto full_fam = FolnerFamily::from_sets(z, full);
  double mean = 0;
  for (double v : f.values) mean += v / 12;
  for (double v : ergodic_average(sys, full_fam, 1, f).values) CHECK(v == doctest::Approx(mean));

  for (std::int64_t n = 1; n <= 30; ++n) {
    const auto fast = ergodic_average(sys, boxes, n, f);
    const auto direct = ergodic_average(sys, boxes, n, f, AveragePath::kDirect);
    const auto brute = rotation_average_oracle(f.values, -n, n);
    for (std::size_t s = 0; s < 12; ++s) {
      CHECK(fast.values[s] == doctest::Approx(brute[s]).epsilon(1e-12));
      CHECK(direct.values[s] == doctest::Approx(brute[s]).epsilon(1e-12));
    }
    CHECK(lp_norm(sys, fast) <= lp_norm(sys, f) + 1e-10);
  }
}

TEST_CASE("averages on Z^2 and H3 agree between paths and contract") {
  Rng rng(5);
  const auto tsys = torus_translation_system(5, 2);
  const auto tf = random_f(rng, tsys.size(), 3);
  const auto tfam = FolnerFamily::standard(tsys.group(), 6);
  const auto hsys = heisenberg_mod_system(3);
  const auto hf = random_f(rng, hsys.size());
  const auto hfam = FolnerFamily::standard(hsys.group(), 3);
  for (std::int64_t n = 1; n <= 3; ++n) {
    const auto a = ergodic_average(tsys, tfam, n, tf);
    const auto b = ergodic_average(tsys, tfam, n, tf, AveragePath::kDirect);
    for (std::size_t s = 0; s < a.values.size(); ++s) CHECK(a.values[s] == doctest::Approx(b.values[s]).epsilon(1e-12));
    CHECK(lp_norm(tsys, a) <= lp_norm(tsys, tf) + 1e-10);
    CHECK(lp_norm(hsys, ergodic_average(hsys, hfam, n, hf)) <= lp_norm(hsys, hf) + 1e-10);
  }
}

TEST_CASE("linearity") {
  Rng rng(3);
  const auto sys = heisenberg_abelianized_system(4);
  const auto fam = FolnerFamily::standard(sys.group(), 3);
  const auto f = random_f(rng, sys.size()), g = random_f(rng, sys.size());
  Observable combo{std::vector<double>(sys.size()), 2};
  for (std::size_t s = 0; s < sys.size(); ++s) combo.values[s] = 2.5 * f.values[s] + g.values[s];
  for (std::int64_t n = 1; n <= 3; ++n) {
    const auto lhs = ergodic_average(sys, fam, n, combo);
    const auto af = ergodic_average(sys, fam, n, f), ag = ergodic_average(sys, fam, n, g);
    for (std::size_t s = 0; s < sys.size(); ++s)
      CHECK(std::abs(lhs.values[s] - (2.5 * af.values[s] + ag.values[s])) < 1e-10);
  }
}

TEST_CASE("average defect") {
  const Group z = Group::integers();
  const FiniteMeasureSystem trivial(z, std::vector<Rational>(3, Rational(1, 3)), {Permutation::identity(3)});
  const auto fam = FolnerFamily::standard(z, 20);
  Observable f{{1, -2, 0.5}, 2};
  CHECK(average_defect(trivial, fam, 3, 7, f) == 0);

  const auto sys = rotation_system(12);
  const auto inv = Observable{std::vector<double>(12, 1.0), 2};
  CHECK(average_defect(sys, fam, 2, 5, inv) == doctest::Approx(0).epsilon(1e-14));

  const Rational eta(1, 4);
  const auto K = convergence_modulus(fam, 2, eta, 20).beta;
  CHECK(K == 8);
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_f(rng, 12);
    for (std::int64_t k = K; k <= 20; ++k) CHECK(average_defect(sys, fam, 2, k, g) < 0.25 * lp_norm(sys, g) + 1e-10);
  }
  CHECK_THROWS(average_defect(sys, fam, 2, 21, inv));
}

TEST_CASE("mean ergodic convergence") {
  Rng rng(9);
  const auto sys = rotation_system(12);
  const auto fam = FolnerFamily::standard(sys.group(), 60);
  const auto f = random_f(rng, 12);
  const auto P = invariant_projection(sys, f);
  const auto seq = average_sequence(sys, fam, f, 60);
  CHECK(seq.size() == 60);
  CHECK(lp_distance(sys, seq.back(), P) < 1e-2);
  double lowest = lp_norm(sys, seq.front());
  for (const auto& a : seq) lowest = std::min(lowest, lp_norm(sys, a));
  CHECK(std::abs(lowest - lp_norm(sys, P)) < 1e-6 + lp_distance(sys, seq.back(), P));
}
