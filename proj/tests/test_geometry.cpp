#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "inclab/errors.hpp"
#include "inclab/geometry.hpp"
#include "oracles.hpp"

using namespace inclab;

namespace {

IntVector iv(std::initializer_list<long> xs) {
  std::vector<Integer> c;
  for (long x : xs) c.emplace_back(x);
  return IntVector(std::move(c));
}

RatPoint pt(std::initializer_list<long> xs) { return RatPoint(iv(xs)); }

RationalVector rv(std::initializer_list<long> xs) {
  RationalVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

Flat random_flat(std::mt19937_64& rng, std::size_t d, std::size_t rows, long box) {
  std::uniform_int_distribution<long> c(-box, box);
  for (;;) {
    RationalMatrix a(rows, RationalVector(d));
    RationalVector b(rows);
    for (auto& r : a)
      for (auto& x : r) x = c(rng);
    for (auto& x : b) x = c(rng);
    if (auto f = Flat::solve(d, a, b)) return *f;
  }
}

}  // namespace

TEST_CASE("rationals are canonical and parse") {
  CHECK(make_rational(6, -4) == frac(-3, 2));
  CHECK(frac(6, 4).get_num() == 3);
  CHECK(parse_rational("-10/4") == frac(-5, 2));
  CHECK(parse_rational("7") == Rational(7));
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidInput);
  CHECK_THROWS_AS(parse_rational("x"), InvalidInput);
  CHECK_THROWS_AS(make_rational(1, 0), InvalidInput);
  CHECK(to_string(frac(3, 4)) == "3/4");
}

TEST_CASE("gcd agrees with Euclid") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> c(-100000, 100000);
  for (int i = 0; i < 500; ++i) {
    const long a = c(rng), b = c(rng);
    CHECK(gcd(Integer(static_cast<long>(a)), Integer(static_cast<long>(b))) ==
          Integer(static_cast<long>(oracle::euclid_gcd(a, b))));
  }
  std::vector<Integer> v{0, 7, 14};
  CHECK(gcd_of(v) == oracle::euclid_gcd(7, 14));
}

TEST_CASE("exact roots") {
  Integer r;
  CHECK(exact_root(Integer(64), 3, r));
  CHECK(r == 4);
  CHECK_FALSE(exact_root(Integer(65), 3, r));
}

TEST_CASE("elimination rank matches minors") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> c(-3, 3);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t rows = dim(rng), cols = dim(rng);
    RationalMatrix m(rows, RationalVector(cols));
    for (auto& r : m)
      for (auto& x : r) x = c(rng);
    if (trial % 3 == 0 && rows > 1) m.back() = m.front();  // force some rank deficiency
    CHECK(rank(m, cols) == oracle::rank_by_minors(m, cols));
    for (const auto& v : nullspace(m, cols)) {
      for (const auto& r : m) {
        Rational acc = 0;
        for (std::size_t j = 0; j < cols; ++j) acc += r[j] * v[j];
        CHECK(acc == 0);
      }
    }
  }
}

TEST_CASE("solve_square") {
  const auto x = solve_square({rv({1, 1}), rv({1, -1})}, rv({3, 1}));
  REQUIRE(x);
  CHECK((*x)[0] == 2);
  CHECK((*x)[1] == 1);
  CHECK_FALSE(solve_square({rv({1, 2}), rv({2, 4})}, rv({1, 2})));
}

TEST_CASE("hyperplanes and membership") {
  const Flat l = make_hyperplane(iv({1, 1}), 3);
  CHECK(l.dim() == 1);
  CHECK(contains(l, pt({1, 2})));
  CHECK_FALSE(contains(l, pt({1, 1})));
  CHECK_THROWS_AS(make_hyperplane(iv({0, 0}), 1), InvalidInput);
  CHECK(same_flat(make_hyperplane(iv({2, 4, 6}), 0), make_hyperplane(iv({1, 2, 3}), 0)));
  CHECK_THROWS_AS(contains(l, pt({1, 2, 3})), InvalidInput);

  const Flat axis = Flat::from_equations(3, {rv({1, 0, 0}), rv({0, 1, 0})}, rv({0, 0}));
  CHECK(axis.dim() == 1);
  CHECK(contains(axis, pt({0, 0, 5})));
  CHECK_THROWS_AS(Flat::from_equations(2, {rv({1, 1}), rv({2, 2})}, rv({1, 3})), InvalidInput);
}

TEST_CASE("membership matches substitution for random hyperplanes") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> c(-4, 4);
  for (int i = 0; i < 300; ++i) {
    std::vector<Integer> n(3), p(3);
    bool zero = true;
    for (auto& x : n) {
      x = c(rng);
      zero = zero && x == 0;
    }
    if (zero) continue;
    for (auto& x : p) x = c(rng);
    const Integer offset = c(rng);
    const Integer dot = n[0] * p[0] + n[1] * p[1] + n[2] * p[2];
    CHECK(contains(make_hyperplane(IntVector(n), offset), RatPoint(IntVector(p))) == (dot == offset));
  }
}

TEST_CASE("intersections") {
  CHECK_FALSE(intersect(make_hyperplane(iv({1, 1}), 0), make_hyperplane(iv({1, 1}), 1)));
  const auto pnt = intersect(make_hyperplane(iv({1, 1}), 3), make_hyperplane(iv({1, -1}), 1));
  REQUIRE(pnt);
  CHECK(pnt->dim() == 0);
  CHECK(contains(*pnt, pt({2, 1})));

  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 2 + i % 5;
    const Flat f1 = random_flat(rng, d, 1 + i % 2, 5);
    const Flat f2 = random_flat(rng, d, 1 + (i / 2) % 3 % d, 5);
    const auto a = intersect(f1, f2);
    const auto b = intersect(f2, f1);
    CHECK(a.has_value() == b.has_value());
    if (a) {
      CHECK(same_flat(*a, *b));
      CHECK(a->dim() + d >= f1.dim() + f2.dim());
      CHECK(is_subflat(*a, f1));
      CHECK(is_subflat(*a, f2));
    }
    const auto self = intersect(f1, f1);
    REQUIRE(self);
    CHECK(same_flat(*self, f1));
  }
  const Flat h5a = make_hyperplane(iv({1, 2, 3, 4, 5}), 1);
  const Flat h5b = make_hyperplane(iv({5, -1, 0, 2, 7}), 2);
  const auto meet = intersect(h5a, h5b);
  REQUIRE(meet);
  CHECK(meet->dim() == 3);
  CHECK_THROWS_AS(intersect(h5a, make_hyperplane(iv({1, 1}), 0)), InvalidInput);
}

TEST_CASE("primitivity") {
  CHECK_FALSE(is_primitive(iv({2, 4})));
  CHECK(is_primitive(iv({3, 5})));
  CHECK_FALSE(is_primitive(iv({0, 7, 14})));
  CHECK_THROWS_AS(is_primitive(iv({0, 0})), InvalidInput);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> c(-20, 20);
  for (int i = 0; i < 200; ++i) {
    const long a = c(rng), b = c(rng);
    if (a == 0 && b == 0) continue;
    for (long j = 2; j <= 4; ++j) CHECK_FALSE(is_primitive(iv({j * a, j * b})));
  }
}

TEST_CASE("complex embedding") {
  auto cr = [](long re, long im) { return ComplexRational{Rational(re), Rational(im)}; };
  const Flat origin = embed_complex_hyperplane(ComplexHyperplane({cr(1, 0)}, cr(0, 0)));
  CHECK(origin.ambient_dim() == 2);
  CHECK(origin.dim() == 0);
  CHECK(contains(origin, pt({0, 0})));

  const Flat diag = embed_complex_hyperplane(ComplexHyperplane({cr(1, 0), cr(-1, 0)}, cr(0, 0)));
  const Flat expected =
      Flat::from_equations(4, {rv({1, 0, -1, 0}), rv({0, 1, 0, -1})}, rv({0, 0}));
  CHECK(same_flat(diag, expected));

  // i z1 + z3 = 1 + i: random solutions map into the embedded flat.
  const ComplexHyperplane h({cr(0, 1), cr(0, 0), cr(1, 0)}, cr(1, 1));
  const Flat e = embed_complex_hyperplane(h);
  CHECK(e.dim() == 4);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> c(-9, 9);
  for (int i = 0; i < 3; ++i) {
    const ComplexRational z1 = cr(c(rng), c(rng)), z2 = cr(c(rng), c(rng));
    const ComplexRational z3 = cr(1, 1) + ComplexRational{Rational(0), Rational(-1)} * z1;
    const ComplexPoint z{z1, z2, z3};
    CHECK(complex_contains(h, z));
    CHECK(contains(e, embed_complex_point(z)));
  }
  CHECK_THROWS_AS(ComplexHyperplane({cr(0, 0), cr(0, 0)}, cr(1, 0)), InvalidInput);
}

TEST_CASE("generic extension") {
  const Flat p = Flat::from_equations(3, {rv({1, 0, 0}), rv({0, 1, 0}), rv({0, 0, 1})}, rv({1, 2, 0}));
  const Flat plane = make_hyperplane(iv({0, 0, 1}), 0);
  const Flat line = generic_extension(p, 1, 3, 42, &plane);
  CHECK(line.dim() == 1);
  CHECK(is_subflat(p, line));
  const auto meet = intersect(line, plane);
  REQUIRE(meet);
  CHECK(same_flat(*meet, p));

  const Flat xaxis = Flat::from_equations(4, {rv({0, 1, 0, 0}), rv({0, 0, 1, 0}), rv({0, 0, 0, 1})},
                                          rv({0, 0, 0}));
  const Flat g = generic_extension(xaxis, 2, 4, 7);
  CHECK(g.rank() == 2);
  CHECK(oracle::rank_by_minors(g.rational_rows(), 4) == 2);
  CHECK(is_subflat(xaxis, g));
  CHECK_THROWS_AS(generic_extension(xaxis, 1, 4, 7), InvalidInput);
  CHECK_THROWS_AS(generic_extension(xaxis, 4, 4, 7), InvalidInput);

  // Deterministic per seed.
  CHECK(same_flat(generic_extension(xaxis, 2, 4, 9), generic_extension(xaxis, 2, 4, 9)));

  // A plane F that contains the requested extension directions cannot be avoided.
  const Flat whole = Flat::from_equations(4, {rv({0, 0, 0, 1})}, rv({0}));
  ExtensionOptions tight;
  tight.retry_budget = 4;
  const Flat in_f = Flat::from_equations(4, {rv({0, 1, 0, 0}), rv({0, 0, 1, 0}), rv({0, 0, 0, 1})},
                                         rv({0, 0, 0}));
  CHECK_THROWS_AS(generic_extension(in_f, 3, 4, 1, &whole, tight), DegenerateRandomness);
}
