#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "inclab/constructions.hpp"
#include "inclab/errors.hpp"
#include "inclab/serialize.hpp"
#include "oracles.hpp"

using namespace inclab;

namespace {

IntVector iv(std::initializer_list<long> xs) {
  std::vector<Integer> c;
  for (long x : xs) c.emplace_back(x);
  return IntVector(std::move(c));
}

std::vector<std::vector<bool>> membership(const ConstructionOutput& out) {
  std::vector<std::vector<bool>> on(out.points.size(), std::vector<bool>(out.flats.size()));
  for (std::size_t f = 0; f < out.flats.size(); ++f) {
    const auto a = out.flats[f].rational_rows();
    const auto b = out.flats[f].rational_rhs();
    for (std::size_t p = 0; p < out.points.size(); ++p)
      on[p][f] = oracle::satisfies(a, b, out.points[p].coords());
  }
  return on;
}

std::uint64_t brute_count(const ConstructionOutput& out, std::size_t upto) {
  std::uint64_t c = 0;
  const auto on = membership(out);
  for (const auto& row : on)
    for (std::size_t f = 0; f < upto; ++f) c += row[f] ? 1 : 0;
  return c;
}

// Maximum number of vectors in one flat_dim-dimensional linear subspace,
// by rank tests on every (flat_dim)-subset and every candidate member.
std::size_t brute_t(const std::vector<IntVector>& vs, std::size_t flat_dim) {
  const std::size_t d = vs.front().dim();
  auto row = [](const IntVector& v) {
    std::vector<Rational> r;
    for (const auto& c : v.coords()) r.emplace_back(c);
    return r;
  };
  oracle::Matrix all;
  for (const auto& v : vs) all.push_back(row(v));
  if (oracle::rank_by_minors(all, d) < flat_dim) return vs.size();
  std::size_t best = 0;
  for (const auto& s : oracle::subsets(vs.size(), flat_dim)) {
    oracle::Matrix basis;
    for (auto i : s) basis.push_back(row(vs[i]));
    if (oracle::rank_by_minors(basis, d) != flat_dim) continue;
    std::size_t count = 0;
    for (const auto& w : vs) {
      oracle::Matrix ext = basis;
      ext.push_back(row(w));
      count += oracle::rank_by_minors(ext, d) == flat_dim ? 1 : 0;
    }
    best = std::max(best, count);
  }
  return best;
}

ConstructionConfig config(Variant v, int d, std::uint64_t m, std::uint64_t n, std::uint64_t seed = 1) {
  ConstructionConfig c;
  c.variant = v;
  c.d = d;
  c.m = m;
  c.n = n;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("lattice points") {
  const auto g9 = lattice_points(2, 9);
  REQUIRE(g9.size() == 9);
  for (long x = 0, i = 0; x < 3; ++x)
    for (long y = 0; y < 3; ++y, ++i) CHECK(g9[i] == RatPoint(iv({x, y})));
  CHECK(lattice_points(3, 27).size() == 27);
  const auto g10 = lattice_points(2, 10);
  REQUIRE(g10.size() == 10);
  std::set<std::vector<Rational>> distinct;
  for (const auto& p : g10) {
    distinct.insert(p.coords());
    for (const auto& c : p.coords()) CHECK((c >= 0 && c <= 3 && c.get_den() == 1));
  }
  CHECK(distinct.size() == 10);
  CHECK(g10.back() == RatPoint(iv({2, 1})));
  CHECK_THROWS_AS(lattice_points(2, 0), InvalidInput);
}

TEST_CASE("primitive vectors") {
  const auto p2 = primitive_vectors(2, 2);
  std::set<std::vector<Integer>> got;
  for (const auto& v : p2) got.insert(v.coords());
  CHECK(got == std::set<std::vector<Integer>>{{1, -1}, {1, 0}, {1, 1}, {0, 1}});
  const auto p4 = primitive_vectors(4, 2);
  CHECK(std::find(p4.begin(), p4.end(), iv({2, 1})) != p4.end());
  CHECK(std::find(p4.begin(), p4.end(), iv({2, 2})) == p4.end());
  CHECK(primitive_vectors(1, 3).empty());
  for (std::uint64_t N = 1; N <= 7; ++N)
    for (int d = 1; d <= 3; ++d) {
      std::vector<std::vector<Integer>> mine, want;
      for (const auto& v : primitive_vectors(N, d)) mine.push_back(v.coords());
      for (const auto& v : oracle::primitive_directions(static_cast<long>(N / 2), d))
        want.emplace_back(v.begin(), v.end());
      CHECK(mine == want);
    }
  CHECK_THROWS_AS(primitive_vectors(0, 2), InvalidInput);
}

TEST_CASE("admissible normal selection") {
  const auto c2 = primitive_vectors(6, 2);
  const auto all = select_admissible_normals(c2, 1, 2, 1000, 3);
  CHECK(all.normals.size() == c2.size());
  CHECK(all.t_measured == 1);
  CHECK(all.verified);
  CHECK(all.shortfall);

  const auto c3 = primitive_vectors(4, 3);
  const auto sel = select_admissible_normals(c3, 2, 3, 12, 9);
  CHECK(sel.verified);
  CHECK(sel.t_measured <= 3);
  CHECK(sel.t_measured == brute_t(sel.normals, 2));
  CHECK(sel.normals.size() <= 12);

  const auto c4 = primitive_vectors(2, 4);
  const auto sel4 = select_admissible_normals(c4, 2, 4, 10, 1);
  CHECK(sel4.t_measured <= 4);
  CHECK(sel4.t_measured == brute_t(sel4.normals, 2));

  // Same seed, same set; a tiny budget leaves t unverified at the cap.
  CHECK(select_admissible_normals(c3, 2, 3, 12, 9).normals == sel.normals);
  const auto capped = select_admissible_normals(c3, 2, 3, 12, 9, 1);
  CHECK_FALSE(capped.verified);
  CHECK(capped.t_measured == 3);

  CHECK_THROWS_AS(select_admissible_normals({iv({2, 4})}, 1, 2, 1, 1), InvalidInput);
  CHECK_THROWS_AS(select_admissible_normals(c3, 3, 2, 1, 1), InvalidInput);
}

TEST_CASE("construction (a): count law, padding, freeness") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    ConstructionConfig cfg = config(Variant::a, 2, 9, 20, seed);
    cfg.N = 2;  // box {-1,0,1}^2: four directions, 16 lines through the 3x3 grid
    const auto out = build_construction_a(cfg);
    CHECK(out.points.size() == 9);
    CHECK(out.flats.size() == 20);
    CHECK(out.predicted_incidences == 9 * static_cast<long>(out.normals_used.size()));
    CHECK(brute_count(out, out.padding_start) == 9 * out.normals_used.size());
    CHECK(brute_count(out, out.flats.size()) == 9 * out.normals_used.size());
    const auto on = membership(out);
    CHECK_FALSE(oracle::has_kst(on, 2, static_cast<int>(out.t_measured) + 1));
  }
  const auto d3 = build_construction_a(config(Variant::a, 3, 64, 80, 2));
  CHECK(brute_count(d3, d3.padding_start) == 64 * d3.normals_used.size());
  CHECK(d3.t_measured == brute_t(d3.normals_used, 2));
  const auto r = verify_construction(d3, 2, static_cast<int>(d3.t_measured) + 1);
  CHECK(r.kst_status == KstStatus::free);
  CHECK(*r.count_law_holds);
  CHECK(*r.incidences_naive == r.incidences_hashed);
  CHECK(r.lower_bound_exponents->m_exponent == frac(4, 5));
  CHECK(r.lower_bound_exponents->n_exponent == frac(3, 5));

  ConstructionConfig unpadded = config(Variant::a, 2, 16, 1000);
  unpadded.pad = false;
  const auto up = build_construction_a(unpadded);
  CHECK(up.padding_start == up.flats.size());

  CHECK_THROWS_AS(build_construction_a(config(Variant::a, 2, 1000000, 2)), InvalidInput);
  CHECK_THROWS_AS(build_construction_a(config(Variant::a, 1, 10, 10)), InvalidInput);
  // The derived box side is >= 1 exactly when m <= n^d, so the regime warning
  // needs an explicit N.
  ConstructionConfig outside = config(Variant::a, 2, 200, 10);
  outside.N = 2;
  CHECK_FALSE(build_construction_a(outside).notes.empty());
}

TEST_CASE("construction determinism") {
  const auto a = instance_to_json(build_construction_a(config(Variant::a, 3, 100, 150, 4)));
  const auto b = instance_to_json(build_construction_a(config(Variant::a, 3, 100, 150, 4)));
  CHECK(a.dump() == b.dump());
  const auto c = instance_to_json(build_construction_a(config(Variant::a, 3, 100, 150, 5)));
  CHECK(a.dump() != c.dump());
}

TEST_CASE("construction (b): sphere law, collinearity, freeness") {
  const auto out = build_construction_b(config(Variant::b, 4, 40, 60, 3));
  REQUIRE(out.points.size() == 40);
  Rational r2 = -1;
  std::vector<std::vector<Rational>> pts;
  for (const auto& p : out.points) {
    Rational acc = 0;
    for (const auto& c : p.coords()) acc += c * c;
    if (r2 < 0) r2 = acc;
    CHECK(acc == r2);
    pts.push_back(p.coords());
  }
  CHECK_FALSE(oracle::three_collinear(pts));
  CHECK_FALSE(has_three_collinear(out.points));
  CHECK(brute_count(out, out.padding_start) == 40 * out.normals_used.size());
  CHECK_FALSE(oracle::has_kst(membership(out), 3, static_cast<int>(out.t_measured) + 1));
  const auto r = verify_construction(out, 3, static_cast<int>(out.t_measured) + 1);
  CHECK(r.kst_status == KstStatus::free);
  CHECK(*r.three_collinear == false);
  CHECK(r.lower_bound_exponents->m_exponent == frac(7, 11));
  CHECK(r.lower_bound_exponents->n_exponent == frac(8, 11));
  CHECK_THROWS_AS(build_construction_b(config(Variant::b, 3, 40, 60)), InvalidInput);
}

TEST_CASE("sphere buckets and rational sphere padding") {
  const auto bucket = largest_sphere_bucket(4, 2, 100);
  CHECK(bucket.radius_squared == 2);
  CHECK(bucket.points.size() == 6);
  const auto normals = primitive_vectors(2, 4);
  std::vector<std::vector<Rational>> offsets;
  for (const auto& v : normals) {
    std::vector<Rational> o;
    for (const auto& p : bucket.points) {
      Rational acc = 0;
      for (std::size_t j = 0; j < 4; ++j) acc += v[j] * p[j];
      o.push_back(acc);
    }
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
    offsets.push_back(o);
  }
  const auto extra = sphere_padding_points(bucket.points.front(), bucket.radius_squared,
                                           bucket.points, normals, offsets, 15, 77);
  REQUIRE(extra.size() == 15);
  std::set<std::vector<Rational>> seen;
  for (const auto& p : bucket.points) seen.insert(p.coords());
  for (const auto& q : extra) {
    Rational acc = 0;
    for (const auto& c : q.coords()) acc += c * c;
    CHECK(acc == 2);
    CHECK(seen.insert(q.coords()).second);
    for (std::size_t i = 0; i < normals.size(); ++i) {
      Rational dot = 0;
      for (std::size_t j = 0; j < 4; ++j) dot += normals[i][j] * q[j];
      CHECK_FALSE(std::binary_search(offsets[i].begin(), offsets[i].end(), dot));
    }
  }
  // A padded (b) instance keeps the count law and the sphere law.
  std::vector<RatPoint> all = bucket.points;
  all.insert(all.end(), extra.begin(), extra.end());
  std::vector<std::vector<Rational>> coords;
  for (const auto& p : all) coords.push_back(p.coords());
  CHECK_FALSE(oracle::three_collinear(coords));
  CHECK_THROWS_AS(sphere_padding_points(largest_sphere_bucket(3, 1, 5).points.front(), 0,
                                        {}, {}, {}, 2, 1),
                  SizeShortfall);
}

TEST_CASE("embedding preserves incidences") {
  const auto inner = build_construction_a(config(Variant::a, 2, 16, 24, 6));
  const std::uint64_t before = brute_count(inner, inner.flats.size());
  for (int d_outer : {3, 4, 5}) {
    for (int k = 1; k < d_outer; ++k) {
      const auto e = embed_construction(inner, d_outer, k, 11);
      CHECK(e.ambient_dim == static_cast<std::size_t>(d_outer));
      CHECK(brute_count(e, e.flats.size()) == before);
      for (const auto& f : e.flats) CHECK(f.dim() == static_cast<std::size_t>(k));
      RationalMatrix rows;
      for (int j = 2; j < d_outer; ++j) {
        RationalVector r(d_outer, Rational(0));
        r[j] = 1;
        rows.push_back(r);
      }
      const Flat F = Flat::from_equations(d_outer, rows, RationalVector(rows.size(), Rational(0)));
      for (std::size_t i = 0; i < e.flats.size(); ++i) {
        auto h_rows = inner.flats[i].rational_rows();
        auto h_rhs = inner.flats[i].rational_rhs();
        for (auto& r : h_rows) r.resize(d_outer, Rational(0));
        h_rows.insert(h_rows.end(), rows.begin(), rows.end());
        h_rhs.resize(h_rows.size(), Rational(0));
        const auto meet = intersect(e.flats[i], F);
        REQUIRE(meet);
        CHECK(same_flat(*meet, Flat::from_equations(d_outer, h_rows, h_rhs)));
      }
      const auto r = verify_construction(e, 2, static_cast<int>(e.t_measured) + 1);
      CHECK(r.incidences_hashed == before);
      CHECK(*r.count_law_holds);
    }
  }
  CHECK_THROWS_AS(embed_construction(inner, 2, 1, 1), InvalidInput);
  CHECK_THROWS_AS(embed_construction(inner, 4, 4, 1), InvalidInput);
  CHECK_THROWS_AS(embed_construction(inner, 4, 0, 1), InvalidInput);
}

TEST_CASE("collinearity detector matches triple oracle") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> c(-2, 2);
  int hits = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + trial % 3;
    std::vector<RatPoint> ps;
    std::vector<std::vector<Rational>> raw;
    const std::size_t m = 3 + trial % 6;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<Rational> p(d);
      for (auto& x : p) x = oracle::canon(c(rng), 1 + trial % 2);
      raw.push_back(p);
      ps.emplace_back(p);
    }
    const bool want = oracle::three_collinear(raw);
    CHECK(has_three_collinear(ps) == want);
    hits += want ? 1 : 0;
  }
  CHECK(hits > 10);
}

TEST_CASE("verification edge cases") {
  ConstructionOutput empty;
  empty.ambient_dim = 2;
  empty.points = lattice_points(2, 4);
  const auto r = verify_construction(empty, 2, 1);
  CHECK(r.incidences_hashed == 0);
  CHECK(r.kst_status == KstStatus::free);
  CHECK_FALSE(r.count_law_holds);

  auto corrupt = build_construction_a(config(Variant::a, 2, 25, 10, 2));
  corrupt.flats.insert(corrupt.flats.begin(), corrupt.flats.front());
  corrupt.padding_start += 1;
  const auto w = verify_construction(corrupt, 2, static_cast<int>(corrupt.t_measured) + 1);
  CHECK(w.kst_status == KstStatus::witness);
  REQUIRE(w.witness);
  CHECK(verify_witness(to_instance(corrupt, 2, static_cast<int>(corrupt.t_measured) + 1), *w.witness));

  VerifyOptions tiny;
  tiny.kst_limit = 1;
  const auto big = build_construction_a(config(Variant::a, 2, 400, 400, 1));
  CHECK(verify_construction(big, 2, 2, tiny).kst_status == KstStatus::unverified);
}

TEST_CASE("instance serialization round trip") {
  auto out = build_construction_b(config(Variant::b, 4, 30, 40, 8));
  out.points.push_back(RatPoint({Rational(Integer("123456789012345678901234567890"), Integer(7)),
                                 Rational(0), Rational(1), frac(-1, 3)}));
  const auto j = instance_to_json(out);
  CHECK(j["schema"] == 1);
  CHECK(j["points"].back()[0][0].is_string());
  const auto back = instance_from_json(nlohmann::json::parse(j.dump()));
  REQUIRE(back.points.size() == out.points.size());
  for (std::size_t i = 0; i < out.points.size(); ++i) CHECK(back.points[i] == out.points[i]);
  REQUIRE(back.flats.size() == out.flats.size());
  for (std::size_t i = 0; i < out.flats.size(); ++i) CHECK(same_flat(back.flats[i], out.flats[i]));
  CHECK(back.kind == "b");
  CHECK(back.normals_used == out.normals_used);
  CHECK(back.padding_start == out.padding_start);
  CHECK(back.predicted_incidences == out.predicted_incidences);
  CHECK(back.parameters == out.parameters);
  CHECK(instance_to_json(back).dump() == j.dump());

  const auto plain = instance_from_json(nlohmann::json::parse(
      R"({"points": [[[1,2],[3,1]], [["5", 3], [0,1]]], "flats": [{"A": [[1, 0]], "b": ["1/2"]}]})"));
  CHECK(plain.kind == "plain");
  CHECK(plain.ambient_dim == 2);
  CHECK(plain.points[1][0] == frac(5, 3));
  CHECK(contains(plain.flats[0], plain.points[0]));
  CHECK_THROWS_AS(instance_from_json(nlohmann::json::parse(R"({"points": [[[1,0]]], "flats": []})")),
                  InvalidInput);
  CHECK_THROWS_AS(instance_from_json(nlohmann::json::parse(R"({"flats": []})")), InvalidInput);
}
