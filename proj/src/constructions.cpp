#include "inclab/constructions.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "inclab/errors.hpp"
#include "inclab/parallel.hpp"
#include "seed.hpp"

namespace inclab {

namespace {

using detail::derive_seed;

// Seed streams, kept distinct so adding one kind of draw never shifts another.
constexpr std::uint64_t kNormalStream = 1;
constexpr std::uint64_t kPaddingStream = 2;
constexpr std::uint64_t kSpherePaddingStream = 3;

constexpr std::uint64_t kMaxBoxCells = 4'000'000;
constexpr std::uint64_t kMaxSphereGrid = 200'000'000;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// Smallest r >= 1 with r^d >= m.
std::uint64_t ceil_root(std::uint64_t m, int d) {
  Integer r;
  const Integer mm(static_cast<unsigned long>(m));
  mpz_root(r.get_mpz_t(), mm.get_mpz_t(), static_cast<unsigned long>(d));
  Integer p;
  mpz_pow_ui(p.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(d));
  if (p < mm) ++r;
  if (r < 1) r = 1;
  return r.get_ui();
}

std::uint64_t checked_power(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t acc = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && acc > cap / base) return cap + 1;
    acc *= base;
  }
  return acc;
}

RationalMatrix as_rows(const std::vector<const IntVector*>& vs) {
  RationalMatrix m;
  m.reserve(vs.size());
  for (const IntVector* v : vs) {
    RationalVector row;
    row.reserve(v->dim());
    for (const auto& c : v->coords()) row.emplace_back(c);
    m.push_back(std::move(row));
  }
  return m;
}

// Normals of the orthogonal complement of span(basis), or nullopt when the
// basis vectors are linearly dependent.
std::optional<std::vector<std::vector<Integer>>> complement_of(
    const std::vector<const IntVector*>& basis, std::size_t d) {
  const RationalMatrix ns = nullspace(as_rows(basis), d);
  if (ns.size() + basis.size() != d) return std::nullopt;
  std::vector<std::vector<Integer>> out;
  out.reserve(ns.size());
  for (const auto& n : ns) out.push_back(primitive_integer_multiple(n));
  return out;
}

bool orthogonal_to_all(const std::vector<std::vector<Integer>>& normals, const IntVector& v) {
  Integer acc;
  for (const auto& n : normals) {
    acc = 0;
    for (std::size_t j = 0; j < n.size(); ++j) acc += n[j] * v[j];
    if (acc != 0) return false;
  }
  return true;
}

// Calls fn(indices) for every r-subset of {0..n-1} in lexicographic order
// until fn returns false. Returns false when stopped early.
template <class Fn>
bool for_each_subset(std::size_t n, std::size_t r, Fn fn) {
  if (r > n) return true;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (;;) {
    if (!fn(idx)) return false;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::size_t rank_of(const std::vector<IntVector>& vs, std::size_t d) {
  std::vector<const IntVector*> ptrs;
  for (const auto& v : vs) ptrs.push_back(&v);
  return rank(as_rows(ptrs), d);
}

bool admissible(const std::vector<IntVector>& accepted, std::size_t accepted_rank,
                const IntVector& v, std::size_t flat_dim, std::size_t t_max, std::size_t d) {
  if (accepted_rank + 1 < flat_dim) return accepted.size() + 1 <= t_max;
  if (accepted_rank < flat_dim) {
    std::vector<IntVector> all = accepted;
    all.push_back(v);
    if (rank_of(all, d) < flat_dim) return accepted.size() + 1 <= t_max;
  }
  return for_each_subset(accepted.size(), flat_dim - 1, [&](const std::vector<std::size_t>& s) {
    std::vector<const IntVector*> basis;
    for (std::size_t i : s) basis.push_back(&accepted[i]);
    basis.push_back(&v);
    const auto comp = complement_of(basis, d);
    if (!comp) return true;
    std::size_t count = 1;
    for (const auto& u : accepted) count += orthogonal_to_all(*comp, u) ? 1 : 0;
    return count <= t_max;
  });
}

std::optional<std::size_t> measure_t(const std::vector<IntVector>& vs, std::size_t flat_dim,
                                     std::size_t d, std::uint64_t limit) {
  if (vs.empty()) return 0;
  if (rank_of(vs, d) < flat_dim) return vs.size();
  // C(|V|, flat_dim) subsets, each tested against |V| vectors of length d.
  long double cost = static_cast<long double>(vs.size()) * static_cast<long double>(d);
  for (std::size_t i = 0; i < flat_dim; ++i) {
    cost *= static_cast<long double>(vs.size() - i) / static_cast<long double>(i + 1);
  }
  if (cost > static_cast<long double>(limit)) return std::nullopt;
  std::size_t best = 0;
  for_each_subset(vs.size(), flat_dim, [&](const std::vector<std::size_t>& s) {
    std::vector<const IntVector*> basis;
    for (std::size_t i : s) basis.push_back(&vs[i]);
    const auto comp = complement_of(basis, d);
    if (!comp) return true;
    std::size_t count = 0;
    for (const auto& u : vs) count += orthogonal_to_all(*comp, u) ? 1 : 0;
    best = std::max(best, count);
    return true;
  });
  return best;
}

void validate_common(int d, std::uint64_t m, std::uint64_t n, double eps_prime) {
  if (m < 1) throw InvalidInput("construction needs m >= 1");
  if (n < 1) throw InvalidInput("construction needs n >= 1");
  if (!(eps_prime >= 0.0 && eps_prime < 1.0)) throw InvalidInput("eps_prime must lie in [0, 1)");
  if (d > 12) throw InvalidInput("construction dimension above 12 is not supported");
}

std::size_t target_size(Variant variant, int d, double N, double eps_prime) {
  const double exponent = (variant == Variant::a ? static_cast<double>(d) : 2.0 * d) / (d - 1) -
                          eps_prime;
  const double value = std::ceil(std::pow(N, exponent));
  if (!(value < 1e9)) throw InvalidInput("normal-set target is too large");
  return std::max<std::size_t>(1, static_cast<std::size_t>(value));
}

struct NormalChoice {
  NormalSelection selection;
  std::uint64_t box_side = 0;
  std::size_t candidates = 0;
};

// Grows the candidate box from ceil(N) until the greedy selection reaches the
// target or the box gets too large.
NormalChoice choose_normals(int d, double N, std::size_t flat_dim, std::size_t t_max,
                            std::size_t target, std::uint64_t seed, std::uint64_t limit) {
  std::uint64_t side = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(N)));
  auto cells = [&](std::uint64_t s) { return checked_power(2 * (s / 2) + 1, d, kMaxBoxCells); };
  if (cells(side) > kMaxBoxCells) throw InvalidInput("normal box too large for this dimension");
  NormalChoice choice;
  for (;;) {
    auto candidates = primitive_vectors(side, d);
    const bool can_grow = cells(side + 2) <= kMaxBoxCells;
    if (candidates.size() < target && can_grow) {
      side += 2;
      continue;
    }
    choice.selection = select_admissible_normals(candidates, flat_dim, t_max, target,
                                                 derive_seed(seed, kNormalStream), limit);
    choice.box_side = side;
    choice.candidates = candidates.size();
    if (!choice.selection.shortfall || !can_grow) return choice;
    side += 2;
  }
}

struct HyperplaneFamily {
  std::vector<Flat> flats;
  std::vector<std::vector<Rational>> offsets;  // sorted, per normal
};

HyperplaneFamily hyperplanes_through(const std::vector<RatPoint>& points,
                                     const std::vector<IntVector>& normals, std::size_t d) {
  HyperplaneFamily family;
  for (const auto& v : normals) {
    std::vector<Rational> offs;
    offs.reserve(points.size());
    for (const auto& p : points) {
      Rational acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc += v[j] * p[j];
      offs.push_back(acc);
    }
    std::sort(offs.begin(), offs.end());
    offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
    RationalVector row;
    for (const auto& c : v.coords()) row.emplace_back(c);
    for (const auto& c : offs) family.flats.push_back(Flat::from_equations(d, {row}, {c}));
    family.offsets.push_back(std::move(offs));
  }
  return family;
}

Integer common_denominator(const std::vector<RatPoint>& points) {
  Integer D = 1;
  for (const auto& p : points) D = lcm(D, p.denominator());
  return D;
}

// A hyperplane a.x = b misses every point with coordinates in (1/D)Z when
// b*D is not a multiple of gcd(a).
bool misses_lattice(const Flat& f, const Integer& D) {
  const auto& row = f.rows().front();
  const Integer g = gcd_of(row);
  const Integer scaled = f.rhs().front() * D;
  return !mpz_divisible_p(scaled.get_mpz_t(), g.get_mpz_t());
}

void pad_hyperplanes(ConstructionOutput& out, std::uint64_t n, std::uint64_t seed) {
  out.padding_start = out.flats.size();
  if (out.flats.size() >= n) return;
  const std::size_t d = out.ambient_dim;
  const Integer D = common_denominator(out.points);
  std::mt19937_64 rng(derive_seed(seed, kPaddingStream));
  std::uniform_int_distribution<long> coord(-(1L << 20), 1L << 20);
  std::set<std::pair<std::vector<Integer>, Integer>> used;
  const std::uint64_t needed = n - out.flats.size();
  std::uint64_t budget = 64 + 4 * needed;
  while (out.flats.size() < n) {
    if (budget-- == 0) throw DegenerateRandomness("could not draw enough padding hyperplanes");
    RationalVector w(d);
    bool zero = true;
    for (auto& x : w) {
      x = Rational(coord(rng));
      if (x != 0) zero = false;
    }
    const long z = coord(rng);
    if (zero) continue;
    const Rational offset = Rational(z) + make_rational(1, 2 * D);
    Flat f = Flat::from_equations(d, {w}, {offset});
    if (!misses_lattice(f, D)) continue;
    if (!used.emplace(f.rows().front(), f.rhs().front()).second) continue;
    out.flats.push_back(std::move(f));
  }
  out.notes.push_back("padded with " + std::to_string(needed) +
                      " hyperplanes whose offsets avoid the point lattice");
}

ExponentPair exponents_for_kind(const std::string& kind, int d) {
  return lower_bound_exponents(kind == "b" ? Variant::b : Variant::a, d);
}

int parameter_int(const ConstructionOutput& out, const std::string& key) {
  const auto it = out.parameters.find(key);
  if (it == out.parameters.end()) throw InvalidInput("construction parameter missing: " + key);
  return std::stoi(it->second);
}

}  // namespace

std::vector<RatPoint> lattice_points(int d, std::uint64_t m) {
  if (d < 1) throw InvalidInput("lattice dimension must be positive");
  if (m < 1) throw InvalidInput("lattice needs m >= 1");
  const std::uint64_t side = ceil_root(m, d);
  std::vector<RatPoint> out;
  out.reserve(m);
  std::vector<std::uint64_t> x(static_cast<std::size_t>(d), 0);
  while (out.size() < m) {
    std::vector<Integer> coords;
    coords.reserve(x.size());
    for (auto c : x) coords.emplace_back(static_cast<unsigned long>(c));
    out.emplace_back(IntVector(std::move(coords)));
    for (std::size_t j = x.size(); j-- > 0;) {
      if (++x[j] < side) break;
      x[j] = 0;
    }
  }
  return out;
}

std::vector<IntVector> primitive_vectors(std::uint64_t N, int d) {
  if (N < 1) throw InvalidInput("primitive_vectors needs N >= 1");
  if (d < 1) throw InvalidInput("primitive_vectors needs d >= 1");
  const long h = static_cast<long>(N / 2);
  if (checked_power(2 * static_cast<std::uint64_t>(h) + 1, d, kMaxBoxCells) > kMaxBoxCells) {
    throw InvalidInput("primitive vector box too large");
  }
  std::vector<IntVector> out;
  if (h == 0) return out;
  std::vector<long> x(static_cast<std::size_t>(d), -h);
  for (;;) {
    long g = 0;
    long first = 0;
    for (long c : x) {
      g = std::gcd(g, c);
      if (first == 0) first = c;
    }
    if (g == 1 && first > 0) {
      std::vector<Integer> coords(x.begin(), x.end());
      out.emplace_back(std::move(coords));
    }
    std::size_t j = x.size();
    while (j > 0 && x[j - 1] == h) x[--j] = -h;
    if (j == 0) break;
    ++x[j - 1];
  }
  return out;
}

NormalSelection select_admissible_normals(const std::vector<IntVector>& candidates,
                                          std::size_t flat_dim, std::size_t t_max,
                                          std::size_t target_size, std::uint64_t seed,
                                          std::uint64_t limit) {
  if (t_max < 1) throw InvalidInput("t_max must be >= 1");
  NormalSelection sel;
  sel.target_size = target_size;
  if (candidates.empty()) {
    sel.verified = true;
    sel.shortfall = target_size > 0;
    return sel;
  }
  const std::size_t d = candidates.front().dim();
  if (flat_dim < 1 || flat_dim >= d) throw InvalidInput("flat_dim must lie in [1, d-1]");
  for (const auto& v : candidates) {
    if (v.dim() != d) throw InvalidInput("candidate vectors differ in dimension");
    if (v.is_zero() || !is_primitive(v)) throw InvalidInput("candidate vectors must be primitive");
  }

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t accepted_rank = 0;
  for (std::size_t idx : order) {
    if (sel.normals.size() >= target_size) break;
    const IntVector& v = candidates[idx];
    if (!admissible(sel.normals, accepted_rank, v, flat_dim, t_max, d)) continue;
    sel.normals.push_back(v);
    if (accepted_rank < d) accepted_rank = rank_of(sel.normals, d);
  }
  sel.shortfall = sel.normals.size() < target_size;

  if (const auto t = measure_t(sel.normals, flat_dim, d, limit)) {
    sel.t_measured = *t;
    sel.verified = true;
  } else {
    sel.t_measured = t_max;
    sel.verified = false;
  }
  return sel;
}

double derived_box_side(Variant variant, int d, std::uint64_t m, std::uint64_t n,
                        double eps_prime) {
  validate_common(d, m, n, eps_prime);
  const double lm = std::log(static_cast<double>(m));
  const double ln = std::log(static_cast<double>(n));
  const double dd = d;
  if (variant == Variant::a) {
    if (d < 2) throw InvalidInput("construction (a) needs d >= 2");
    const double e = 2 * dd - 1 - (dd - 1) * eps_prime;
    return std::exp((dd - 1) / e * ln - (dd - 1) / (dd * e) * lm);
  }
  if (d < 4) throw InvalidInput("construction (b) needs d >= 4");
  const double e = 3 * dd - 1 - (dd - 1) * eps_prime;
  return std::exp((dd - 1) / e * ln - (dd - 1) / ((dd - 2) * e) * lm);
}

namespace {

ConstructionOutput build_hyperplane_construction(const ConstructionConfig& cfg) {
  const bool part_a = cfg.variant == Variant::a;
  const int d = cfg.d;
  if (part_a ? d < 2 : d < 4) {
    throw InvalidInput(part_a ? "construction (a) needs d >= 2" : "construction (b) needs d >= 4");
  }
  validate_common(d, cfg.m, cfg.n, cfg.eps_prime);
  if (cfg.t < 0) throw InvalidInput("t must be >= 0 (0 selects the default 2d)");
  const std::size_t t_max = cfg.t > 0 ? static_cast<std::size_t>(cfg.t) : 2 * static_cast<std::size_t>(d);
  const std::size_t flat_dim = part_a ? d - 1 : d - 2;

  const double N = cfg.N ? *cfg.N : derived_box_side(cfg.variant, d, cfg.m, cfg.n, cfg.eps_prime);
  if (!(N >= 1.0)) {
    throw InvalidInput("normal-box side N = " + format_double(N) + " < 1: m is too large relative to n^" +
                       (part_a ? std::to_string(d) : std::to_string(d - 2)) +
                       "; lower m or raise n");
  }

  ConstructionOutput out;
  out.kind = part_a ? "a" : "b";
  out.ambient_dim = static_cast<std::size_t>(d);

  const double regime = part_a ? d : d - 2;
  if (std::log(static_cast<double>(cfg.m)) > regime * std::log(static_cast<double>(cfg.n)) + 1e-12) {
    out.notes.push_back(std::string("warning: m exceeds n^") + format_double(regime) +
                        ", outside the intended regime");
  }

  const std::size_t target = target_size(cfg.variant, d, N, cfg.eps_prime);

  std::uint64_t grid_side = 0;
  SphereBucket bucket;
  if (part_a) {
    out.points = lattice_points(d, cfg.m);
    grid_side = ceil_root(cfg.m, d);
  } else {
    grid_side = ceil_root(cfg.m, d - 2);
    bucket = largest_sphere_bucket(d, grid_side, cfg.m);
    out.points = bucket.points;
  }

  const NormalChoice choice =
      choose_normals(d, N, flat_dim, t_max, target, cfg.seed, cfg.verify_limit);
  out.normals_used = choice.selection.normals;
  out.t_measured = choice.selection.t_measured;
  out.t_verified = choice.selection.verified;
  if (choice.selection.shortfall) {
    out.notes.push_back("normal selection fell short: " + std::to_string(out.normals_used.size()) +
                        " of target " + std::to_string(target));
  }
  if (!out.t_verified) {
    out.notes.push_back("t_measured unverified above size cap; reporting the greedy bound");
  }

  if (!part_a && out.points.size() < cfg.m) {
    const std::size_t missing = cfg.m - out.points.size();
    const auto existing = hyperplanes_through(out.points, out.normals_used, out.ambient_dim);
    auto extra = sphere_padding_points(out.points.front(), bucket.radius_squared, out.points,
                                       out.normals_used, existing.offsets, missing,
                                       derive_seed(cfg.seed, kSpherePaddingStream));
    out.points.insert(out.points.end(), extra.begin(), extra.end());
    out.notes.push_back("added " + std::to_string(missing) + " rational sphere points");
  }

  out.flats = hyperplanes_through(out.points, out.normals_used, out.ambient_dim).flats;
  out.padding_start = out.flats.size();
  out.predicted_incidences = Integer(static_cast<unsigned long>(out.points.size())) *
                             static_cast<unsigned long>(out.normals_used.size());
  if (cfg.pad) pad_hyperplanes(out, cfg.n, cfg.seed);

  auto& p = out.parameters;
  p["variant"] = out.kind;
  p["d"] = std::to_string(d);
  p["m"] = std::to_string(cfg.m);
  p["n"] = std::to_string(cfg.n);
  p["N"] = format_double(N);
  p["box_side"] = std::to_string(choice.box_side);
  p["candidates"] = std::to_string(choice.candidates);
  p["grid_side"] = std::to_string(grid_side);
  p["t_max"] = std::to_string(t_max);
  p["target_size"] = std::to_string(target);
  p["seed"] = std::to_string(cfg.seed);
  p["eps_prime"] = format_double(cfg.eps_prime);
  p["pad"] = cfg.pad ? "true" : "false";
  if (!part_a) p["radius_squared"] = to_string(bucket.radius_squared);
  return out;
}

}  // namespace

ConstructionOutput build_construction_a(const ConstructionConfig& cfg) {
  ConstructionConfig c = cfg;
  c.variant = Variant::a;
  return build_hyperplane_construction(c);
}

ConstructionOutput build_construction_b(const ConstructionConfig& cfg) {
  ConstructionConfig c = cfg;
  c.variant = Variant::b;
  return build_hyperplane_construction(c);
}

ConstructionOutput build_construction(const ConstructionConfig& cfg) {
  return build_hyperplane_construction(cfg);
}

SphereBucket largest_sphere_bucket(int d, std::uint64_t side, std::uint64_t m) {
  if (d < 1 || side < 1) throw InvalidInput("sphere grid needs d >= 1 and side >= 1");
  if (checked_power(side, d, kMaxSphereGrid) > kMaxSphereGrid) {
    throw InvalidInput("sphere grid too large");
  }
  const std::uint64_t max_norm = static_cast<std::uint64_t>(d) * (side - 1) * (side - 1);
  std::vector<std::uint64_t> counts(max_norm + 1, 0);
  std::vector<std::uint64_t> x(static_cast<std::size_t>(d), 0);
  auto advance = [&] {
    for (std::size_t j = x.size(); j-- > 0;) {
      if (++x[j] < side) return true;
      x[j] = 0;
    }
    return false;
  };
  auto norm = [&] {
    std::uint64_t acc = 0;
    for (auto c : x) acc += c * c;
    return acc;
  };
  do {
    ++counts[norm()];
  } while (advance());
  // Largest bucket; ties go to the smallest radius.
  const auto best = static_cast<std::uint64_t>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());

  SphereBucket bucket;
  bucket.radius_squared = Integer(static_cast<unsigned long>(best));
  std::fill(x.begin(), x.end(), 0);
  do {
    if (norm() != best) continue;
    std::vector<Integer> coords;
    for (auto c : x) coords.emplace_back(static_cast<unsigned long>(c));
    bucket.points.emplace_back(IntVector(std::move(coords)));
  } while (bucket.points.size() < m && advance());
  return bucket;
}

std::vector<RatPoint> sphere_padding_points(
    const RatPoint& anchor, const Integer& radius_squared, const std::vector<RatPoint>& existing,
    const std::vector<IntVector>& normals, const std::vector<std::vector<Rational>>& forbidden_offsets,
    std::size_t count, std::uint64_t seed) {
  const std::size_t d = anchor.dim();
  if (normals.size() != forbidden_offsets.size()) {
    throw InvalidInput("one offset list per normal is required");
  }
  Rational anchor_norm = 0;
  for (const auto& c : anchor.coords()) anchor_norm += c * c;
  if (anchor_norm != radius_squared) throw InvalidInput("anchor is not on the sphere");

  std::set<std::vector<Rational>> seen;
  for (const auto& p : existing) seen.insert(p.coords());
  std::vector<RatPoint> out;
  if (count == 0) return out;
  if (radius_squared == 0) throw SizeShortfall("a sphere of radius 0 has one point", existing.size());

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(-1000, 1000);
  std::uint64_t budget = 64 + 64 * static_cast<std::uint64_t>(count);
  while (out.size() < count) {
    if (budget-- == 0) {
      throw SizeShortfall("sphere padding could not reach the requested point count",
                          existing.size() + out.size());
    }
    std::vector<Rational> u(d);
    Rational uu = 0;
    Rational pu = 0;
    for (std::size_t j = 0; j < d; ++j) {
      u[j] = Rational(coord(rng));
      uu += u[j] * u[j];
      pu += anchor[j] * u[j];
    }
    if (pu == 0) continue;  // tangent direction or zero vector
    const Rational lambda = -2 * pu / uu;
    std::vector<Rational> q(d);
    for (std::size_t j = 0; j < d; ++j) q[j] = anchor[j] + lambda * u[j];

    bool blocked = false;
    for (std::size_t i = 0; i < normals.size() && !blocked; ++i) {
      Rational off = 0;
      for (std::size_t j = 0; j < d; ++j) off += normals[i][j] * q[j];
      blocked = std::binary_search(forbidden_offsets[i].begin(), forbidden_offsets[i].end(), off);
    }
    if (blocked || !seen.insert(q).second) continue;
    out.emplace_back(std::move(q));
  }
  return out;
}

ConstructionOutput embed_construction(const ConstructionOutput& inner, int d_outer, int k,
                                      std::uint64_t seed) {
  const std::size_t d_in = inner.ambient_dim;
  if (d_in < 1) throw InvalidInput("inner configuration has no dimension");
  if (d_outer <= static_cast<int>(d_in)) throw InvalidInput("d_outer must exceed the inner dimension");
  if (k < static_cast<int>(d_in) - 1 || k >= d_outer) {
    throw InvalidInput("embedding needs d' - 1 <= k < d_outer");
  }
  for (const auto& f : inner.flats) {
    if (f.ambient_dim() != d_in || f.dim() + 1 != d_in) {
      throw InvalidInput("embedding expects an inner configuration of hyperplanes");
    }
  }
  const std::size_t D = static_cast<std::size_t>(d_outer);

  RationalMatrix f_rows;
  for (std::size_t j = d_in; j < D; ++j) {
    RationalVector row(D, Rational(0));
    row[j] = 1;
    f_rows.push_back(std::move(row));
  }
  const Flat F = Flat::from_equations(D, f_rows, RationalVector(f_rows.size(), Rational(0)));

  ConstructionOutput out;
  out.kind = "embed";
  out.ambient_dim = D;
  out.points.reserve(inner.points.size());
  for (const auto& p : inner.points) {
    std::vector<Rational> c = p.coords();
    c.resize(D, Rational(0));
    out.points.emplace_back(std::move(c));
  }

  out.flats.reserve(inner.flats.size());
  for (std::size_t i = 0; i < inner.flats.size(); ++i) {
    RationalMatrix rows = inner.flats[i].rational_rows();
    RationalVector rhs = inner.flats[i].rational_rhs();
    for (auto& r : rows) r.resize(D, Rational(0));
    rows.insert(rows.end(), f_rows.begin(), f_rows.end());
    rhs.resize(rows.size(), Rational(0));
    const Flat h = Flat::from_equations(D, rows, rhs);
    Flat g = static_cast<std::size_t>(k) == h.dim()
                 ? h
                 : generic_extension(h, static_cast<std::size_t>(k), D, derive_seed(seed, i), &F);
    const auto meet = intersect(g, F);
    if (!meet || !same_flat(*meet, h)) {
      throw DegenerateRandomness("extension meets the embedding flat beyond the original flat");
    }
    out.flats.push_back(std::move(g));
  }

  out.normals_used = inner.normals_used;
  out.t_measured = inner.t_measured;
  out.t_verified = inner.t_verified;
  out.predicted_incidences = inner.predicted_incidences;
  out.padding_start = inner.padding_start;
  out.notes = inner.notes;
  out.notes.push_back("embedded into R^" + std::to_string(d_outer) + " with " + std::to_string(k) +
                      "-flats; every extension meets the embedding flat in the original flat");
  for (const auto& [key, value] : inner.parameters) {
    if (key.rfind("inner_", 0) != 0) out.parameters["inner_" + key] = value;
  }
  out.parameters["inner_kind"] = inner.kind;
  out.parameters["inner_dim"] = std::to_string(d_in);
  out.parameters["d_outer"] = std::to_string(d_outer);
  out.parameters["k"] = std::to_string(k);
  out.parameters["embed_seed"] = std::to_string(seed);
  return out;
}

bool has_three_collinear(const std::vector<RatPoint>& points) {
  const std::size_t m = points.size();
  if (m < 3) return false;
  const Integer D = common_denominator(points);
  std::vector<std::vector<Integer>> x;
  x.reserve(m);
  for (const auto& p : points) {
    const Integer factor = D / p.denominator();
    std::vector<Integer> s = p.scaled();
    for (auto& c : s) c *= factor;
    x.push_back(std::move(s));
  }
  std::atomic<bool> found{false};
  parallel_chunks(
      m,
      [&](std::size_t begin, std::size_t end) {
        std::unordered_set<std::vector<Integer>, IntegerVectorHash> directions;
        std::vector<Integer> diff;
        for (std::size_t i = begin; i < end && !found.load(std::memory_order_relaxed); ++i) {
          directions.clear();
          for (std::size_t j = i + 1; j < m; ++j) {
            diff.resize(x[i].size());
            for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = x[j][c] - x[i][c];
            const Integer g = gcd_of(diff);
            if (g == 0) {  // repeated point: collinear with anything
              found = true;
              return;
            }
            int sign = 0;
            for (const auto& c : diff) {
              if (c != 0) {
                sign = sgn(c);
                break;
              }
            }
            for (auto& c : diff) {
              c /= g;
              if (sign < 0) c = -c;
            }
            if (!directions.insert(diff).second) {
              found = true;
              return;
            }
          }
        }
      },
      8);
  return found.load();
}

std::string to_string(KstStatus status) {
  switch (status) {
    case KstStatus::free: return "free";
    case KstStatus::witness: return "witness";
    case KstStatus::unverified: return "unverified";
  }
  return "unknown";
}

ExponentPair lower_bound_exponents(Variant variant, int d) {
  const Integer D = d;
  if (variant == Variant::a) {
    if (d < 2) throw InvalidInput("construction (a) needs d >= 2");
    return {make_rational(2 * D - 2, 2 * D - 1), make_rational(D, 2 * D - 1)};
  }
  if (d < 4) throw InvalidInput("construction (b) needs d >= 4");
  return {make_rational(3 * D * D - 9 * D + 2, (D - 2) * (3 * D - 1)),
          make_rational(2 * D, 3 * D - 1)};
}

IncidenceInstance to_instance(const ConstructionOutput& out, int s, int t) {
  return IncidenceInstance(out.ambient_dim, out.points, out.flats, s, t);
}

VerificationReport verify_construction(const ConstructionOutput& out, int s, int t,
                                       const VerifyOptions& options) {
  if (out.padding_start > out.flats.size()) throw InvalidInput("padding_start exceeds the flat count");
  const IncidenceInstance inst = to_instance(out, s, t);
  VerificationReport report;
  report.s = s;
  report.t = t;

  const IncidenceGraph graph = incidence_graph(inst, CountStrategy::hashed);
  report.incidences_hashed = graph.edges;
  if (options.naive) report.incidences_naive = count_incidences(inst, CountStrategy::naive);
  for (std::size_t f = 0; f < graph.points_of_flat.size(); ++f) {
    (f < out.padding_start ? report.incidences_non_padding : report.incidences_padding) +=
        graph.points_of_flat[f].size();
  }
  report.predicted_incidences = out.predicted_incidences;
  if (out.kind != "plain") {
    report.count_law_holds =
        Integer(static_cast<unsigned long>(report.incidences_non_padding)) == out.predicted_incidences;
  }

  try {
    KstOptions kst;
    kst.limit = options.kst_limit;
    report.witness = find_kst(graph, s, t, kst);
    report.kst_status = report.witness ? KstStatus::witness : KstStatus::free;
  } catch (const ResourceLimit& e) {
    report.kst_status = KstStatus::unverified;
    report.kst_note = e.what();
  }

  report.t_measured = out.t_measured;
  report.t_verified = out.t_verified;
  if (options.collinearity && out.kind == "b" && out.points.size() <= options.collinearity_cap) {
    report.three_collinear = has_three_collinear(out.points);
  }

  const int d = static_cast<int>(out.ambient_dim);
  if (out.kind == "a" || out.kind == "b") {
    report.lower_bound_exponents = exponents_for_kind(out.kind, d);
    if (d >= 2) report.leading_term_exponents = leading_exponents(d - 1, d, s);
  } else if (out.kind == "embed") {
    const auto it = out.parameters.find("inner_kind");
    if (it != out.parameters.end() && (it->second == "a" || it->second == "b")) {
      report.lower_bound_exponents = exponents_for_kind(it->second, parameter_int(out, "inner_dim"));
    }
    report.leading_term_exponents = leading_exponents(parameter_int(out, "k"), d, s);
  }
  return report;
}

}  // namespace inclab
