#include "ergolab/errors.hpp"
#include "ergolab/folner.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace ergolab;

namespace {

oracle::Tuple tuple(const GroupElement& g) { return oracle::Tuple(g.view().begin(), g.view().end()); }

FolnerFamily explicit_boxes(const Group& group, std::int64_t n_max) {
  std::vector<ElementSet> sets;
  for (std::int64_t n = 1; n <= n_max; ++n) sets.push_back(group.box(n));
  return FolnerFamily::from_sets(group, std::move(sets));
}

}  // namespace

TEST_CASE("standard family sizes") {
  CHECK(FolnerFamily::standard(Group::integers(), 3).size(3) == 7);
  CHECK(FolnerFamily::standard(Group::integers(), 3).elements(3).size() == 7);
  CHECK(FolnerFamily::standard(Group::lattice(2), 2).size(2) == 25);
  // brute count of |a|,|b| <= 1, |c| <= 1
  int count = 0;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) ++count;
  CHECK(FolnerFamily::standard(Group::heisenberg(), 1).size(1) == count);
  CHECK_THROWS_AS(FolnerFamily::standard(Group::integers(), 0), DomainError);
  CHECK_THROWS_AS(FolnerFamily::standard(Group::integers(), 3).term(4), StructuralError);
}

TEST_CASE("folner ratio against brute force") {
  const Group z = Group::integers();
  const auto fam = FolnerFamily::standard(z, 8);
  for (std::int64_t n = 1; n <= 8; ++n) CHECK(folner_ratio(fam, n, z.identity()) == 0);
  CHECK(folner_ratio(fam, 5, z.element({2})) == Rational(4, 11));

  const Group z2 = Group::lattice(2);
  const auto fam2 = FolnerFamily::standard(z2, 6);
  for (std::int64_t m = 1; m <= 6; ++m) {
    const auto box = oracle::lattice_box(2, m);
    const auto brute = oracle::sym_diff(box, {1, 0}, oracle::lattice_mul);
    CHECK(folner_ratio(fam2, m, z2.element({1, 0})) == Rational(brute, static_cast<std::int64_t>(box.size())));
    CHECK(folner_ratio(fam2, m, z2.element({1, 0})) == Rational(2, 2 * m + 1));
  }

  const Group h = Group::heisenberg();
  const auto famh = FolnerFamily::standard(h, 2);
  std::set<oracle::Tuple> hbox;
  for (auto& g : h.box(2)) hbox.insert(tuple(g));
  for (const auto& g : h.enumerate_prefix(40)) {
    const auto brute = oracle::sym_diff(hbox, tuple(g), oracle::heis_mul);
    CHECK(folner_ratio(famh, 2, g) == Rational(brute, static_cast<std::int64_t>(hbox.size())));
  }
}

TEST_CASE("closed-form lattice box difference") {
  const Group z3 = Group::lattice(3);
  for (std::int64_t r = 0; r <= 3; ++r) {
    const auto box = oracle::lattice_box(3, r);
    for (const auto& g : z3.enumerate_prefix(60)) {
      CHECK(lattice_box_difference(r, g) == oracle::sym_diff(box, tuple(g), oracle::lattice_mul));
    }
  }
}

TEST_CASE("analytic convergence modulus on Z boxes") {
  const Group z = Group::integers();
  const auto fam = FolnerFamily::standard(z, 200);
  // Oracle: least N with every m in [N, 200] and every |k| <= n brute-force below eps.
  auto window_oracle = [&](std::int64_t n, const Rational& eps) {
    std::int64_t last_bad = 0;
    for (std::int64_t m = 1; m <= 200; ++m) {
      const auto box = oracle::lattice_box(1, m);
      for (std::int64_t k = -n; k <= n; ++k) {
        const Rational r(oracle::sym_diff(box, {k}, oracle::lattice_mul), static_cast<std::int64_t>(box.size()));
        if (!(r < eps)) last_bad = m;
      }
    }
    return last_bad + 1;
  };
  const auto v = convergence_modulus(fam, 5, Rational(1, 10), 200);
  CHECK(v.beta == 50);
  CHECK(v.kind == ModulusKind::kAnalytic);
  CHECK_FALSE(v.certified_up_to.has_value());
  CHECK(window_oracle(5, Rational(1, 10)) == 50);
  CHECK(convergence_modulus(fam, 1, Rational(1, 2), 200).beta == 2);
  CHECK(window_oracle(1, Rational(1, 2)) == 2);
  CHECK(convergence_modulus(fam, 7, Rational(2), 200).beta == window_oracle(7, Rational(2)));
  CHECK(convergence_modulus(fam, 3, Rational(5, 2), 200).beta == 1);
  CHECK_THROWS_AS(convergence_modulus(fam, 3, Rational(0), 200), DomainError);
}

TEST_CASE("empirical modulus agrees with analytic on explicit boxes") {
  for (const Group& g : {Group::integers(), Group::lattice(2)}) {
    const auto standard = FolnerFamily::standard(g, 40);
    const auto explicit_fam = explicit_boxes(g, 40);
    for (std::int64_t n = 1; n <= 3; ++n) {
      const Rational eps(1, 2);
      const auto a = convergence_modulus(standard, n, eps, 40);
      const auto e = convergence_modulus(explicit_fam, n, eps, 40);
      CHECK(e.kind == ModulusKind::kEmpirical);
      CHECK(e.certified_up_to == 40);
      CHECK(a.beta == e.beta);
    }
  }
  const auto fam = explicit_boxes(Group::integers(), 10);
  CHECK_THROWS_AS(convergence_modulus(fam, 5, Rational(1, 10), 10), ModulusNotFound);
  try {
    convergence_modulus(fam, 5, Rational(1, 10), 10);
  } catch (const ModulusNotFound& e) {
    CHECK(e.n() == 5);
    CHECK(e.last_violation() == 10);
  }
  CHECK(convergence_modulus(fam, 5, Rational(2), 10).beta == 3);
  CHECK(convergence_modulus(fam, 5, Rational(5, 2), 10).beta == 1);
}

TEST_CASE("modulus tables and envelope") {
  ModulusTable t(Rational(1, 4), ModulusKind::kEmpirical, 10);
  t.set(1, 3);
  t.set(2, 2);
  t.set(3, 5);
  const auto env = envelope(t);
  CHECK(env.beta(1) == 3);
  CHECK(env.beta(2) == 3);
  CHECK(env.beta(3) == 5);
  const auto env2 = envelope(env);
  CHECK(env2.entries() == env.entries());

  ModulusTable single(Rational(1), ModulusKind::kAnalytic, std::nullopt);
  single.set(1, 4);
  CHECK(envelope(single).beta(1) == 4);

  ModulusTable holes(Rational(1), ModulusKind::kEmpirical, 5);
  holes.set(1, 2);
  holes.set(3, 4);
  CHECK_THROWS_AS(envelope(holes), StructuralError);

  ModulusTable absent(Rational(1), ModulusKind::kEmpirical, 5);
  absent.set(1, 2);
  absent.set(2, std::nullopt);
  absent.set(3, 3);
  CHECK_FALSE(envelope(absent).beta(3).has_value());

  const auto fam = explicit_boxes(Group::integers(), 12);
  const auto table = modulus_table(fam, Rational(1, 3), 4, 12);
  CHECK(table.kind() == ModulusKind::kEmpirical);
  CHECK(table.certifies(12));
  CHECK_FALSE(table.certifies(13));
  // 2n/(2m+1) < 1/3 <=> 2m+1 > 6n: n=1 -> 3, n=2 -> 6, n=3 -> 9, n=4 -> 12.
  CHECK(table.beta(1) == 3);
  CHECK(table.beta(2) == 6);
  CHECK(table.beta(3) == 9);
  CHECK(table.beta(4) == 12);
}

TEST_CASE("greedy construction on Z") {
  const Group z = Group::integers();
  const auto fam = greedy_folner(z, 5, 1'000);
  CHECK(fam.provenance() == Provenance::kGreedy);
  CHECK(fam.elements(1) == ElementSet{z.identity()});
  CHECK(fam.elements(2) == ElementSet{z.element({0}), z.element({1})});
  // F~_3 = [-3, 3] (first radius with 2/(2r+1) < 1/3), plus g_3 = -1.
  CHECK(fam.elements(3) == z.box(3));
  // F~_4: 6/(2r+1) < 1/4 first at r = 12; g_4 = 2 already inside.
  CHECK(fam.size(4) == 25);
  // F~_5: 24/(2r+1) < 1/5 first at r = 60.
  CHECK(fam.size(5) == 121);
  CHECK(check_greedy_stage_bound(fam).pass);
  for (std::int64_t n = 1; n + 1 <= fam.length(); ++n) {
    const auto a = fam.elements(n), b = fam.elements(n + 1);
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
  CHECK_THROWS_AS(greedy_folner(z, 5, 10), BudgetExhausted);
  try {
    greedy_folner(z, 5, 10);
  } catch (const BudgetExhausted& e) {
    CHECK(e.stage() == 4);
  }
}

TEST_CASE("greedy construction on Z^2 and H3 keeps the 3/n bound") {
  CHECK(check_greedy_stage_bound(greedy_folner(Group::lattice(2), 4, 10'000)).pass);
  CHECK(check_greedy_stage_bound(greedy_folner(Group::heisenberg(), 3, 1'000)).pass);
}

TEST_CASE("fast refinement") {
  const Group z = Group::integers();
  const auto fam = FolnerFamily::standard(z, 40);
  const auto ref = fast_refinement(fam, Rational(1, 2));
  REQUIRE(ref.source_index.size() >= 2);
  CHECK(ref.source_index[0] == 1);
  CHECK(ref.source_index[1] == 2);
  CHECK(ref.family.provenance() == Provenance::kRefined);
  CHECK(check_fast(ref.family, 1, Rational(1, 2), ref.family.length()).pass);

  // The bisecting path for boxes and the scanning path for explicit sets agree.
  const auto scanned = fast_refinement(explicit_boxes(z, 40), Rational(1, 2));
  CHECK(scanned.source_index == ref.source_index);
  const auto scanned2 = fast_refinement(explicit_boxes(Group::lattice(2), 30), Rational(1, 2));
  const auto bisected2 = fast_refinement(FolnerFamily::standard(Group::lattice(2), 30), Rational(1, 2));
  CHECK(scanned2.source_index == bisected2.source_index);

  const auto vacuous = fast_refinement(FolnerFamily::standard(z, 10), Rational(2));
  CHECK(vacuous.source_index == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const auto vacuous_explicit = fast_refinement(explicit_boxes(z, 10), Rational(5, 2));
  CHECK(vacuous_explicit.source_index.size() == 10);

  CHECK_THROWS_AS(fast_refinement(fam, Rational(1, 10), 10), RefinementExhausted);
  const auto limited = fast_refinement(fam, Rational(1, 2), 3);
  CHECK(limited.family.length() == 3);

  // Huge standard families refine without materializing anything.
  const auto far = fast_refinement(FolnerFamily::standard(z, 1'000'000'000'000), Rational(1, 1000));
  CHECK(far.source_index.size() >= 3);
  CHECK(check_fast(far.family, 1, Rational(1, 1000), far.family.length()).pass);
}

TEST_CASE("fastness checks") {
  const Group z = Group::integers();
  const auto fam = FolnerFamily::standard(z, 20);
  const auto report = check_fast(fam, 1, Rational(1, 10), 20);
  CHECK_FALSE(report.pass);
  REQUIRE(report.first_violation);
  CHECK_FALSE(report.first_violation->ratio < Rational(1, 10));
  CHECK(folner_ratio(fam, 11, z.element({10})) == Rational(20, 23));
  CHECK(check_fast(fam, 1, Rational(2), 20).pass);
  CHECK(check_fast(explicit_boxes(z, 8), 3, Rational(5, 2), 8).pass);
}

TEST_CASE("greedy on Z matches a brute-force reimplementation") {
  // Candidates prev ∪ [-r, r], accepted when n |F Δ (F + k)| < |F| for all k in prev.
  std::set<std::int64_t> prev{0};
  const std::vector<std::int64_t> stream{0, 1, -1, 2, -2, 3};
  std::vector<std::set<std::int64_t>> expected{prev};
  for (std::int64_t n = 2; n <= 6; ++n) {
    for (std::int64_t r = 0;; ++r) {
      std::set<std::int64_t> cand = prev;
      for (std::int64_t v = -r; v <= r; ++v) cand.insert(v);
      bool ok = true;
      for (std::int64_t k : prev) {
        std::int64_t diff = 0;
        for (std::int64_t v : cand) diff += cand.count(v + k) ? 0 : 1;
        for (std::int64_t v : cand) diff += cand.count(v - k) ? 0 : 1;
        if (n * diff >= static_cast<std::int64_t>(cand.size())) ok = false;
      }
      if (ok) {
        cand.insert(stream[static_cast<std::size_t>(n - 1)]);
        prev = cand;
        break;
      }
    }
    expected.push_back(prev);
  }
  const Group z = Group::integers();
  const auto fam = greedy_folner(z, 6, 100'000);
  for (std::int64_t n = 1; n <= 6; ++n) {
    ElementSet want;
    for (std::int64_t v : expected[static_cast<std::size_t>(n - 1)]) want.push_back(z.element({v}));
    CHECK(fam.elements(n) == want);
  }
}
