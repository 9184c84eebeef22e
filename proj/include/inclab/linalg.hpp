#pragma once

// Exact Gauss-Jordan elimination over the rationals.

#include <cstddef>
#include <optional>
#include <vector>

#include "inclab/number.hpp"

namespace inclab {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

struct EchelonForm {
  RationalMatrix rows;               // nonzero rows of the reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each row
};

/// Reduced row echelon form of a matrix with `cols` columns. Rows of the
/// input must all have length `cols`.
EchelonForm reduce_rows(RationalMatrix m, std::size_t cols);

std::size_t rank(const RationalMatrix& m, std::size_t cols);

/// Basis of {x : m x = 0}, one vector per free column.
RationalMatrix nullspace(const RationalMatrix& m, std::size_t cols);

/// Unique solution of the square system a x = b, or nullopt if a is singular.
std::optional<RationalVector> solve_square(const RationalMatrix& a, const RationalVector& b);

/// Multiplies by the lcm of denominators and divides by the gcd of the
/// resulting numerators; zero vectors map to zero vectors.
std::vector<Integer> primitive_integer_multiple(const RationalVector& v);

}  // namespace inclab
