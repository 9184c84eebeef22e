#include "inclab/linalg.hpp"

#include <utility>

#include "inclab/errors.hpp"

namespace inclab {

EchelonForm reduce_rows(RationalMatrix m, std::size_t cols) {
  for (const auto& row : m) {
    if (row.size() != cols) throw InvalidInput("matrix row has wrong length");
  }
  EchelonForm out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.size() && sgn(m[pivot][c]) == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[r], m[pivot]);
    const Rational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      const Rational factor = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= factor * m[r][j];
    }
    out.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

std::size_t rank(const RationalMatrix& m, std::size_t cols) {
  return reduce_rows(m, cols).pivots.size();
}

RationalMatrix nullspace(const RationalMatrix& m, std::size_t cols) {
  const EchelonForm e = reduce_rows(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  RationalMatrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < e.rows.size(); ++i) v[e.pivots[i]] = -e.rows[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RationalVector> solve_square(const RationalMatrix& a, const RationalVector& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw InvalidInput("right-hand side length mismatch");
  if (n == 0) return RationalVector{};
  RationalMatrix aug;
  aug.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw InvalidInput("system matrix is not square");
    RationalVector row = a[i];
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  const EchelonForm e = reduce_rows(std::move(aug), n + 1);
  if (e.pivots.size() != n || e.pivots.back() != n - 1) return std::nullopt;
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = e.rows[i][n];
  return x;
}

std::vector<Integer> primitive_integer_multiple(const RationalVector& v) {
  Integer den = 1;
  for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> out;
  out.reserve(v.size());
  Integer g = 0;
  for (const auto& x : v) {
    Integer scaled = x.get_num() * (den / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled.get_mpz_t());
    out.push_back(std::move(scaled));
  }
  if (g > 1) {
    for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
  return out;
}

}  // namespace inclab
