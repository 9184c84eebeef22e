#pragma once

// Exponent calculus of the general incidence bound: problematic dimension
// pairs, significant sequences, and the exponents of every bound term.

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "inclab/number.hpp"

namespace inclab {

/// (k, d): k-dimensional objects in R^d, with 1 <= k < d.
struct DimPair {
  int k;
  int d;

  DimPair(int k_, int d_);
  Rational ratio() const { return frac(k, d); }

  friend bool operator==(const DimPair&, const DimPair&) = default;
  friend auto operator<=>(const DimPair&, const DimPair&) = default;
};

std::string to_string(const DimPair& p);

/// A chain ((k_0,d_0),...,(k_u,d_u)) with k_j < d_j, k non-increasing,
/// d strictly decreasing down to >= 2, and k_j/d_j strictly increasing.
class SignificantSequence {
 public:
  explicit SignificantSequence(std::vector<DimPair> pairs);

  const std::vector<DimPair>& pairs() const { return pairs_; }
  const DimPair& head() const { return pairs_.front(); }
  const DimPair& tail() const { return pairs_.back(); }
  /// Number of q-parameters (u).
  std::size_t length() const { return pairs_.size() - 1; }

  friend bool operator==(const SignificantSequence&, const SignificantSequence&) = default;

 private:
  std::vector<DimPair> pairs_;
};

std::string to_string(const SignificantSequence& seq);

/// {(k',d') : 1<=k'<=k, 2<=d'<=d, k/d < k'/d' < 1}, ordered by d desc, k desc.
std::vector<DimPair> compute_R(int k, int d);

/// Pairs of compute_R(k, d) with k'/d' <= 1/2. Requires k <= d/2.
std::vector<DimPair> compute_R_bar(int k, int d);

/// All significant sequences starting at (k, d). With `restricted`, every
/// element after the first must come from compute_R_bar(k, d).
std::vector<SignificantSequence> enumerate_S(int k, int d, bool restricted = false);

struct ExponentPair {
  Rational m_exponent;
  Rational n_exponent;
  friend bool operator==(const ExponentPair&, const ExponentPair&) = default;
};

/// Exponents of T_{k,d}(m,n) = m^{sk/(ds-d+k)} n^{(ds-d)/(ds-d+k)}.
ExponentPair leading_exponents(int k, int d, int s);

struct LeadingTerm {
  ExponentPair exponents;
  std::string value;  // T_{k,d}(m,n) to `digits` significant digits
  int digits = 30;
};

LeadingTerm leading_term_T(int k, int d, int s, const Integer& m, const Integer& n,
                           int digits = 30);

/// m^{alpha+eps} n^{beta} q_{k_1,d_1}^{beta_1} ... q_{k_u,d_u}^{beta_u}.
/// The eps is never folded into alpha.
struct BoundTerm {
  Rational alpha;
  Rational beta;
  std::vector<std::pair<DimPair, Rational>> q_exponents;
  bool epsilon_slot = true;

  /// beta + sum of the q-exponents.
  Rational total_n_exponent() const;

  friend bool operator==(const BoundTerm&, const BoundTerm&) = default;
};

BoundTerm term_from_closed_form(const SignificantSequence& seq, int s);

/// Solves alpha + s(beta + sum beta_j) = s together with
/// d_j alpha + (d_j - k_j)(beta + beta_1 + ... + beta_j) = d_j for j = 0..u
/// by exact elimination. Throws Degenerate when the system is singular.
BoundTerm solve_exponent_system(const SignificantSequence& seq, int s);

/// Exponents outside [0, s]; empty when the term is in range.
std::vector<std::string> exponent_range_findings(const BoundTerm& term, int s);

/// Comparison of T_{k2,d2} against T_{k,d} under 1 <= n <= m^s.
///
/// With mu = (m-exponent difference) and nu = (n-exponent difference), the
/// ratio T_{k2,d2}/T_{k,d} is m^mu n^nu, and log of it is linear in log n on
/// [0, s log m]. Dominance holds iff it is <= 0 at both ends of the interval.
struct DominanceReport {
  Rational mu;
  Rational nu;
  Rational at_n_equals_one;    // mu
  Rational at_n_equals_m_pow_s;  // mu + s nu
  bool dominated = false;
  bool identical = false;        // both exponent differences vanish
  bool tight_at_boundary = false;  // equality when n = m^s
  std::size_t samples = 0;
  std::size_t violations = 0;    // sampled (log m, log n) points with a positive log-ratio
};

DominanceReport ratio_dominates(int k, int d, int k2, int d2, int s, std::size_t samples,
                                std::uint64_t seed);

}  // namespace inclab
