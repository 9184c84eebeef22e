#pragma once

// Exact points, integer vectors and affine flats in R^d.
//
// Flats are always stored as consistent linear systems A x = b. The rows are
// kept in reduced row echelon form, each row scaled to a primitive integer
// vector over (A_i, b_i), so membership tests are integer-only.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "inclab/linalg.hpp"
#include "inclab/number.hpp"

namespace inclab {

class IntVector {
 public:
  explicit IntVector(std::vector<Integer> coords);

  std::size_t dim() const { return coords_.size(); }
  const Integer& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<Integer>& coords() const { return coords_; }
  bool is_zero() const;

  friend bool operator==(const IntVector&, const IntVector&) = default;
  friend auto operator<=>(const IntVector& a, const IntVector& b) { return a.coords_ <=> b.coords_; }

 private:
  std::vector<Integer> coords_;
};

class RatPoint {
 public:
  explicit RatPoint(std::vector<Rational> coords);
  explicit RatPoint(const IntVector& v);

  std::size_t dim() const { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<Rational>& coords() const { return coords_; }

  /// Least common denominator of the coordinates.
  const Integer& denominator() const { return denominator_; }
  /// denominator() * coords, as integers.
  const std::vector<Integer>& scaled() const { return scaled_; }

  friend bool operator==(const RatPoint& a, const RatPoint& b) { return a.coords_ == b.coords_; }

 private:
  std::vector<Rational> coords_;
  Integer denominator_;
  std::vector<Integer> scaled_;
};

class Flat {
 public:
  /// The solution set of A x = b, or nullopt when the system is inconsistent.
  static std::optional<Flat> solve(std::size_t ambient_dim, const RationalMatrix& a,
                                   const RationalVector& b);
  /// Like solve(), but an inconsistent system is an InvalidInput error.
  static Flat from_equations(std::size_t ambient_dim, const RationalMatrix& a,
                             const RationalVector& b);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return ambient_dim_ - rows_.size(); }
  std::size_t rank() const { return rows_.size(); }
  bool is_hyperplane() const { return rows_.size() == 1; }

  const std::vector<std::vector<Integer>>& rows() const { return rows_; }
  const std::vector<Integer>& rhs() const { return rhs_; }
  RationalMatrix rational_rows() const;
  RationalVector rational_rhs() const;

  /// One solution: free coordinates set to zero.
  RatPoint point() const;
  /// Basis of the direction space {x : A x = 0}.
  RationalMatrix direction_basis() const;

  bool contains(const RatPoint& p) const;

 private:
  Flat() = default;

  std::size_t ambient_dim_ = 0;
  std::vector<std::vector<Integer>> rows_;
  std::vector<Integer> rhs_;
  std::vector<std::size_t> pivots_;
};

struct ComplexRational {
  Rational re;
  Rational im;
  friend bool operator==(const ComplexRational&, const ComplexRational&) = default;
};

ComplexRational operator+(const ComplexRational& a, const ComplexRational& b);
ComplexRational operator*(const ComplexRational& a, const ComplexRational& b);

/// a_1 z_1 + ... + a_d z_d = b over the complex numbers.
class ComplexHyperplane {
 public:
  ComplexHyperplane(std::vector<ComplexRational> a, ComplexRational b);

  std::size_t dim() const { return a_.size(); }
  const std::vector<ComplexRational>& coefficients() const { return a_; }
  const ComplexRational& offset() const { return b_; }

 private:
  std::vector<ComplexRational> a_;
  ComplexRational b_;
};

using ComplexPoint = std::vector<ComplexRational>;

Flat make_hyperplane(const IntVector& normal, const Integer& offset);

/// Throws InvalidInput on a dimension mismatch.
bool contains(const Flat& f, const RatPoint& p);

/// Intersection of two flats; nullopt when it is empty.
std::optional<Flat> intersect(const Flat& f1, const Flat& f2);

/// f1 ⊆ f2 as point sets.
bool is_subflat(const Flat& f1, const Flat& f2);

/// Set equality: equal row spaces plus one shared solution point.
bool same_flat(const Flat& f1, const Flat& f2);

bool is_primitive(const IntVector& v);

/// The coordinatewise real/imaginary map C^d -> R^{2d}.
RatPoint embed_complex_point(const ComplexPoint& z);
bool complex_contains(const ComplexHyperplane& h, const ComplexPoint& z);
/// The (2d-2)-flat of R^{2d} cut out by the real and imaginary parts of h.
Flat embed_complex_hyperplane(const ComplexHyperplane& h);

struct ExtensionOptions {
  int retry_budget = 32;
  /// Extension directions are drawn uniformly from [-box, box]^d.
  std::int64_t box = std::int64_t{1} << 20;
};

/// A random k-flat G of R^d with h ⊆ G. When `avoid` is given, the draw is
/// retried until G ∩ avoid equals h exactly; otherwise until dim G == k.
Flat generic_extension(const Flat& h, std::size_t target_dim, std::size_t ambient_dim,
                       std::uint64_t seed, const Flat* avoid = nullptr,
                       const ExtensionOptions& options = {});

}  // namespace inclab
