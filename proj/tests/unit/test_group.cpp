#include "ergolab/errors.hpp"
#include "ergolab/group.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace ergolab;

TEST_CASE("integer law and inverse") {
  const Group z = Group::integers();
  CHECK(z.multiply(z.element({2}), z.element({3})) == z.element({5}));
  CHECK(z.multiply(z.element({4}), z.identity()) == z.element({4}));
  CHECK(z.inverse(z.element({7})) == z.element({-7}));
  const Group z2 = Group::lattice(2);
  CHECK(z2.inverse(z2.identity()) == z2.identity());
}

TEST_CASE("heisenberg law") {
  const Group h = Group::heisenberg();
  CHECK(h.multiply(h.element({1, 0, 0}), h.element({0, 1, 0})) == h.element({1, 1, 1}));
  CHECK(h.multiply(h.element({0, 1, 0}), h.element({1, 0, 0})) == h.element({1, 1, 0}));
  CHECK(h.inverse(h.element({1, 1, 1})) == h.element({-1, -1, 0}));
  // z = x y x^-1 y^-1
  const auto x = h.element({1, 0, 0}), y = h.element({0, 1, 0});
  CHECK(h.multiply(h.multiply(x, y), h.multiply(h.inverse(x), h.inverse(y))) == h.element({0, 0, 1}));
}

TEST_CASE("enumeration prefixes") {
  const Group z = Group::integers();
  const auto e5 = z.enumerate_prefix(5);
  REQUIRE(e5.size() == 5);
  const std::int64_t expected[] = {0, 1, -1, 2, -2};
  for (int i = 0; i < 5; ++i) CHECK(e5[i] == z.element({expected[i]}));
  CHECK(z.enumerate_prefix(1).front() == z.identity());

  const Group z2 = Group::lattice(2);
  const auto p = z2.enumerate_prefix(5);
  CHECK(p[0] == z2.element({0, 0}));
  CHECK(p[1] == z2.element({1, 0}));
  CHECK(p[2] == z2.element({-1, 0}));
  CHECK(p[3] == z2.element({0, 1}));
  CHECK(p[4] == z2.element({0, -1}));

  CHECK_THROWS_AS(z.enumerate_prefix(0), DomainError);
}

TEST_CASE("enumeration is injective and prefix-stable") {
  for (const Group& g : {Group::integers(), Group::lattice(2), Group::lattice(3), Group::heisenberg()}) {
    const auto big = g.enumerate_prefix(400);
    const auto small = g.enumerate_prefix(57);
    for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i] == big[i]);
    CHECK(make_set(big).size() == big.size());
    CHECK(big.front() == g.identity());
  }
}

TEST_CASE("group axioms, exhaustive on Z") {
  const Group z = Group::integers();
  const auto pts = z.enumerate_prefix(30);
  for (const auto& a : pts) {
    CHECK(z.multiply(a, z.inverse(a)) == z.identity());
    CHECK(z.multiply(z.inverse(a), a) == z.identity());
    CHECK(z.multiply(a, z.identity()) == a);
    for (const auto& b : pts)
      for (const auto& c : pts) REQUIRE(z.multiply(z.multiply(a, b), c) == z.multiply(a, z.multiply(b, c)));
  }
}

TEST_CASE("group axioms, randomized on Z^2 and H3") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::int64_t> coord(-1000, 1000);
  for (const Group& g : {Group::lattice(2), Group::heisenberg()}) {
    auto draw = [&] {
      std::vector<std::int64_t> c(static_cast<std::size_t>(g.rank()));
      for (auto& v : c) v = coord(rng);
      return g.element(c);
    };
    for (int i = 0; i < 1000; ++i) {
      const auto a = draw(), b = draw(), c = draw();
      REQUIRE(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)));
      REQUIRE(g.multiply(a, g.inverse(a)) == g.identity());
      REQUIRE(g.multiply(g.inverse(a), a) == g.identity());
      REQUIRE(g.multiply(g.identity(), a) == a);
    }
  }
}

TEST_CASE("structural errors and overflow") {
  const Group z = Group::integers();
  const Group h = Group::heisenberg();
  const Group z3 = Group::lattice(3);
  CHECK_THROWS_AS(z.multiply(z.identity(), h.identity()), StructuralError);
  CHECK_THROWS_AS(h.inverse(z3.element({1, 2, 3})), StructuralError);
  CHECK_THROWS_AS(z.element({1, 2}), StructuralError);
  CHECK_THROWS_AS(Group::from_name("F2"), StructuralError);
  const auto big = std::numeric_limits<std::int64_t>::max();
  CHECK_THROWS_AS(z.multiply(z.element({big}), z.element({1})), OverflowError);
  CHECK_THROWS_AS(h.multiply(h.element({big / 2, 0, 0}), h.element({0, 4, 0})), OverflowError);
  CHECK(Group::from_name("Z^2") == Group::lattice(2));
  CHECK(Group::from_name("H3").name() == "H3");
}

TEST_CASE("boxes and set arithmetic") {
  const Group h = Group::heisenberg();
  CHECK(h.box(1).size() == 27);
  CHECK(h.box_size(2) == 5 * 5 * 9);
  const auto box = h.box(2);
  CHECK(std::is_sorted(box.begin(), box.end()));
  // left translation keeps canonical order
  const auto moved = translate(h, h.element({3, -2, 5}), box);
  CHECK(std::is_sorted(moved.begin(), moved.end()));
  CHECK(symmetric_difference_size(box, box) == 0);
  const Group z = Group::integers();
  CHECK(symmetric_difference_size(z.box(2), translate(z, z.element({1}), z.box(2))) == 2);
}
