#include "inclab/geometry.hpp"

#include <random>
#include <utility>

#include "inclab/errors.hpp"

namespace inclab {

// ---------------------------------------------------------------------------
// IntVector / RatPoint

IntVector::IntVector(std::vector<Integer> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidInput("IntVector must have dimension >= 1");
}

bool IntVector::is_zero() const {
  for (const auto& x : coords_) {
    if (x != 0) return false;
  }
  return true;
}

RatPoint::RatPoint(std::vector<Rational> coords) : coords_(std::move(coords)), denominator_(1) {
  if (coords_.empty()) throw InvalidInput("RatPoint must have dimension >= 1");
  for (auto& x : coords_) {
    x.canonicalize();
    mpz_lcm(denominator_.get_mpz_t(), denominator_.get_mpz_t(), x.get_den_mpz_t());
  }
  scaled_.reserve(coords_.size());
  for (const auto& x : coords_) scaled_.push_back(x.get_num() * (denominator_ / x.get_den()));
}

RatPoint::RatPoint(const IntVector& v)
    : denominator_(1), scaled_(v.coords()) {
  coords_.reserve(v.dim());
  for (const auto& x : v.coords()) coords_.emplace_back(x);
}

// ---------------------------------------------------------------------------
// Flat

std::optional<Flat> Flat::solve(std::size_t ambient_dim, const RationalMatrix& a,
                                const RationalVector& b) {
  if (ambient_dim == 0) throw InvalidInput("flat must live in R^d with d >= 1");
  if (a.size() != b.size()) throw InvalidInput("equation count mismatch between A and b");
  RationalMatrix aug;
  aug.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != ambient_dim) throw InvalidInput("equation has wrong number of coefficients");
    RationalVector row = a[i];
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  EchelonForm e = reduce_rows(std::move(aug), ambient_dim + 1);
  if (!e.pivots.empty() && e.pivots.back() == ambient_dim) return std::nullopt;

  Flat f;
  f.ambient_dim_ = ambient_dim;
  f.pivots_ = std::move(e.pivots);
  for (auto& row : e.rows) {
    std::vector<Integer> ints = primitive_integer_multiple(row);
    f.rhs_.push_back(std::move(ints.back()));
    ints.pop_back();
    f.rows_.push_back(std::move(ints));
  }
  return f;
}

Flat Flat::from_equations(std::size_t ambient_dim, const RationalMatrix& a,
                          const RationalVector& b) {
  auto f = solve(ambient_dim, a, b);
  if (!f) throw InvalidInput("inconsistent linear system does not define a flat");
  return std::move(*f);
}

RationalMatrix Flat::rational_rows() const {
  RationalMatrix out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) out.emplace_back(row.begin(), row.end());
  return out;
}

RationalVector Flat::rational_rhs() const { return RationalVector(rhs_.begin(), rhs_.end()); }

RatPoint Flat::point() const {
  std::vector<Rational> x(ambient_dim_, Rational(0));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    x[pivots_[i]] = make_rational(rhs_[i], rows_[i][pivots_[i]]);
  }
  return RatPoint(std::move(x));
}

RationalMatrix Flat::direction_basis() const { return nullspace(rational_rows(), ambient_dim_); }

bool Flat::contains(const RatPoint& p) const {
  if (p.dim() != ambient_dim_) throw InvalidInput("point and flat live in different dimensions");
  const auto& x = p.scaled();
  Integer acc;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    acc = 0;
    const auto& row = rows_[i];
    for (std::size_t j = 0; j < ambient_dim_; ++j) {
      if (row[j] != 0) acc += row[j] * x[j];
    }
    if (acc != rhs_[i] * p.denominator()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Complex numbers

ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
  return {a.re + b.re, a.im + b.im};
}

ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexHyperplane::ComplexHyperplane(std::vector<ComplexRational> a, ComplexRational b)
    : a_(std::move(a)), b_(std::move(b)) {
  bool nonzero = false;
  for (const auto& c : a_) nonzero = nonzero || sgn(c.re) != 0 || sgn(c.im) != 0;
  if (!nonzero) throw InvalidInput("complex hyperplane needs a nonzero coefficient");
}

// ---------------------------------------------------------------------------
// Operations

Flat make_hyperplane(const IntVector& normal, const Integer& offset) {
  if (normal.is_zero()) throw InvalidInput("hyperplane normal must be nonzero");
  RationalMatrix a{RationalVector(normal.coords().begin(), normal.coords().end())};
  return Flat::from_equations(normal.dim(), a, {Rational(offset)});
}

bool contains(const Flat& f, const RatPoint& p) { return f.contains(p); }

namespace {

void require_same_ambient(const Flat& f1, const Flat& f2) {
  if (f1.ambient_dim() != f2.ambient_dim()) {
    throw InvalidInput("flats live in different ambient dimensions");
  }
}

RationalMatrix stacked_rows(const Flat& f1, const Flat& f2) {
  RationalMatrix rows = f1.rational_rows();
  for (auto& r : f2.rational_rows()) rows.push_back(std::move(r));
  return rows;
}

}  // namespace

std::optional<Flat> intersect(const Flat& f1, const Flat& f2) {
  require_same_ambient(f1, f2);
  RationalVector rhs = f1.rational_rhs();
  for (auto& x : f2.rational_rhs()) rhs.push_back(std::move(x));
  return Flat::solve(f1.ambient_dim(), stacked_rows(f1, f2), rhs);
}

bool is_subflat(const Flat& f1, const Flat& f2) {
  require_same_ambient(f1, f2);
  if (!f2.contains(f1.point())) return false;
  return rank(stacked_rows(f1, f2), f1.ambient_dim()) == f1.rank();
}

bool same_flat(const Flat& f1, const Flat& f2) {
  require_same_ambient(f1, f2);
  if (f1.rank() != f2.rank()) return false;
  if (rank(stacked_rows(f1, f2), f1.ambient_dim()) != f1.rank()) return false;
  return f2.contains(f1.point());
}

bool is_primitive(const IntVector& v) {
  if (v.is_zero()) throw InvalidInput("primitivity is undefined for the zero vector");
  return gcd_of(v.coords()) == 1;
}

RatPoint embed_complex_point(const ComplexPoint& z) {
  std::vector<Rational> out;
  out.reserve(2 * z.size());
  for (const auto& c : z) {
    out.push_back(c.re);
    out.push_back(c.im);
  }
  return RatPoint(std::move(out));
}

bool complex_contains(const ComplexHyperplane& h, const ComplexPoint& z) {
  if (z.size() != h.dim()) throw InvalidInput("complex point and hyperplane dimension mismatch");
  ComplexRational acc{0, 0};
  for (std::size_t j = 0; j < z.size(); ++j) acc = acc + h.coefficients()[j] * z[j];
  return acc == h.offset();
}

Flat embed_complex_hyperplane(const ComplexHyperplane& h) {
  const std::size_t d = h.dim();
  RationalVector real_part(2 * d, Rational(0));
  RationalVector imag_part(2 * d, Rational(0));
  for (std::size_t j = 0; j < d; ++j) {
    const auto& a = h.coefficients()[j];
    // Re(a z) = a_x z_x - a_y z_y,  Im(a z) = a_x z_y + a_y z_x
    real_part[2 * j] = a.re;
    real_part[2 * j + 1] = -a.im;
    imag_part[2 * j] = a.im;
    imag_part[2 * j + 1] = a.re;
  }
  return Flat::from_equations(2 * d, {real_part, imag_part}, {h.offset().re, h.offset().im});
}

Flat generic_extension(const Flat& h, std::size_t target_dim, std::size_t ambient_dim,
                       std::uint64_t seed, const Flat* avoid, const ExtensionOptions& options) {
  if (h.ambient_dim() != ambient_dim) throw InvalidInput("flat does not live in the given R^d");
  if (target_dim <= h.dim() || target_dim >= ambient_dim) {
    throw InvalidInput("generic extension needs dim(h) < k < d");
  }
  if (avoid != nullptr) require_same_ambient(h, *avoid);

  const RationalMatrix base_directions = h.direction_basis();
  const RatPoint anchor = h.point();
  const std::size_t extra = target_dim - h.dim();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> coord(-options.box, options.box);

  for (int attempt = 0; attempt < options.retry_budget; ++attempt) {
    RationalMatrix directions = base_directions;
    for (std::size_t e = 0; e < extra; ++e) {
      RationalVector v(ambient_dim);
      for (auto& x : v) x = Rational(static_cast<long>(coord(rng)));
      directions.push_back(std::move(v));
    }
    if (rank(directions, ambient_dim) != target_dim) continue;

    const RationalMatrix normals = nullspace(directions, ambient_dim);
    RationalVector rhs;
    rhs.reserve(normals.size());
    for (const auto& n : normals) {
      Rational acc = 0;
      for (std::size_t j = 0; j < ambient_dim; ++j) acc += n[j] * anchor[j];
      rhs.push_back(acc);
    }
    Flat g = Flat::from_equations(ambient_dim, normals, rhs);
    if (g.dim() != target_dim || !is_subflat(h, g)) continue;
    if (avoid != nullptr) {
      const auto meet = intersect(g, *avoid);
      if (!meet || !same_flat(*meet, h)) continue;
    }
    return g;
  }
  throw DegenerateRandomness("generic extension failed after " +
                             std::to_string(options.retry_budget) + " seeded draws");
}

}  // namespace inclab
