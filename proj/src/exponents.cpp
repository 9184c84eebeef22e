#include "inclab/exponents.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "highprec.hpp"
#include "inclab/errors.hpp"
#include "inclab/linalg.hpp"

namespace inclab {

DimPair::DimPair(int k_, int d_) : k(k_), d(d_) {
  if (k < 1 || k >= d) {
    throw InvalidInput("dimension pair needs 1 <= k < d, got (" + std::to_string(k) + "," +
                       std::to_string(d) + ")");
  }
}

std::string to_string(const DimPair& p) {
  return "(" + std::to_string(p.k) + "," + std::to_string(p.d) + ")";
}

SignificantSequence::SignificantSequence(std::vector<DimPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw InvalidInput("significant sequence must be nonempty");
  if (pairs_.back().d < 2) throw InvalidInput("significant sequence must end with d >= 2");
  for (std::size_t j = 1; j < pairs_.size(); ++j) {
    const DimPair& prev = pairs_[j - 1];
    const DimPair& cur = pairs_[j];
    if (cur.k > prev.k) throw InvalidInput("significant sequence: k must be non-increasing");
    if (cur.d >= prev.d) throw InvalidInput("significant sequence: d must strictly decrease");
    if (cur.ratio() <= prev.ratio()) {
      throw InvalidInput("significant sequence: k/d must strictly increase");
    }
  }
}

std::string to_string(const SignificantSequence& seq) {
  std::string out = "(";
  for (std::size_t j = 0; j < seq.pairs().size(); ++j) {
    if (j > 0) out += ",";
    out += to_string(seq.pairs()[j]);
  }
  return out + ")";
}

namespace {

void require_valid(int k, int d) { DimPair{k, d}; }

void require_s(int s) {
  if (s < 2) throw InvalidInput("s must be >= 2");
}

}  // namespace

std::vector<DimPair> compute_R(int k, int d) {
  require_valid(k, d);
  const Rational base = frac(k, d);
  std::vector<DimPair> out;
  for (int dd = d; dd >= 2; --dd) {
    for (int kk = std::min(k, dd - 1); kk >= 1; --kk) {
      if (frac(kk, dd) > base) out.emplace_back(kk, dd);
    }
  }
  return out;
}

std::vector<DimPair> compute_R_bar(int k, int d) {
  require_valid(k, d);
  if (2 * k > d) throw InvalidInput("R-bar needs k <= d/2");
  std::vector<DimPair> out;
  for (const auto& p : compute_R(k, d)) {
    if (p.ratio() <= frac(1, 2)) out.push_back(p);
  }
  return out;
}

std::vector<SignificantSequence> enumerate_S(int k, int d, bool restricted) {
  const std::vector<DimPair> pool = restricted ? compute_R_bar(k, d) : compute_R(k, d);
  std::vector<SignificantSequence> out;
  std::vector<DimPair> chain{DimPair{k, d}};
  // pool is ordered by d descending, so a chain only ever extends forward.
  std::function<void(std::size_t)> grow = [&](std::size_t from) {
    out.emplace_back(chain);
    for (std::size_t i = from; i < pool.size(); ++i) {
      const DimPair& last = chain.back();
      const DimPair& next = pool[i];
      if (next.d >= last.d || next.k > last.k || next.ratio() <= last.ratio()) continue;
      chain.push_back(next);
      grow(i + 1);
      chain.pop_back();
    }
  };
  grow(0);
  return out;
}

ExponentPair leading_exponents(int k, int d, int s) {
  require_valid(k, d);
  require_s(s);
  const int denom = d * s - d + k;
  return {frac(s * k, denom), frac(d * s - d, denom)};
}

LeadingTerm leading_term_T(int k, int d, int s, const Integer& m, const Integer& n, int digits) {
  if (m < 1 || n < 1) throw InvalidInput("T_{k,d}(m,n) needs m, n >= 1");
  LeadingTerm out;
  out.exponents = leading_exponents(k, d, s);
  out.digits = digits;
  out.value = detail::power_product(
      {{m, out.exponents.m_exponent}, {n, out.exponents.n_exponent}}, digits);
  return out;
}

Rational BoundTerm::total_n_exponent() const {
  Rational sum = beta;
  for (const auto& [pair, e] : q_exponents) sum += e;
  return sum;
}

BoundTerm term_from_closed_form(const SignificantSequence& seq, int s) {
  require_s(s);
  const DimPair& last = seq.tail();
  const int denom = s * last.d - last.d + last.k;
  const Rational outer = frac((last.d - last.k) * (s - 1), denom);
  auto blowup = [](const DimPair& p) { return frac(p.d, p.d - p.k); };

  BoundTerm term;
  term.alpha = frac(s * last.k, denom);
  term.beta = blowup(seq.head()) * outer;
  for (std::size_t j = 1; j < seq.pairs().size(); ++j) {
    const Rational e = (blowup(seq.pairs()[j]) - blowup(seq.pairs()[j - 1])) * outer;
    term.q_exponents.emplace_back(seq.pairs()[j], e);
  }
  return term;
}

BoundTerm solve_exponent_system(const SignificantSequence& seq, int s) {
  require_s(s);
  const std::size_t u = seq.length();
  const std::size_t unknowns = u + 2;  // alpha, beta, beta_1..beta_u
  RationalMatrix a;
  RationalVector b;

  RationalVector first(unknowns, Rational(s));
  first[0] = 1;
  a.push_back(first);
  b.emplace_back(s);

  for (std::size_t j = 0; j <= u; ++j) {
    const DimPair& p = seq.pairs()[j];
    RationalVector row(unknowns, Rational(0));
    row[0] = p.d;
    for (std::size_t i = 1; i <= j + 1; ++i) row[i] = p.d - p.k;
    a.push_back(std::move(row));
    b.emplace_back(p.d);
  }

  const auto x = solve_square(a, b);
  if (!x) throw Degenerate("exponent system is singular for " + to_string(seq));
  BoundTerm term;
  term.alpha = (*x)[0];
  term.beta = (*x)[1];
  for (std::size_t j = 1; j <= u; ++j) term.q_exponents.emplace_back(seq.pairs()[j], (*x)[j + 1]);
  return term;
}

std::vector<std::string> exponent_range_findings(const BoundTerm& term, int s) {
  std::vector<std::string> findings;
  auto check = [&](const std::string& name, const Rational& e) {
    if (sgn(e) < 0 || e > s) findings.push_back(name + " = " + to_string(e) + " outside [0, s]");
  };
  check("alpha", term.alpha);
  check("beta", term.beta);
  for (const auto& [pair, e] : term.q_exponents) check("q" + to_string(pair), e);
  return findings;
}

DominanceReport ratio_dominates(int k, int d, int k2, int d2, int s, std::size_t samples,
                                std::uint64_t seed) {
  require_valid(k, d);
  require_valid(k2, d2);
  require_s(s);
  if (frac(k2, d2) > frac(k, d)) {
    throw InvalidInput("dominance needs k2/d2 <= k/d");
  }
  const ExponentPair big = leading_exponents(k, d, s);
  const ExponentPair small = leading_exponents(k2, d2, s);

  DominanceReport r;
  r.mu = small.m_exponent - big.m_exponent;
  r.nu = small.n_exponent - big.n_exponent;
  r.at_n_equals_one = r.mu;
  r.at_n_equals_m_pow_s = r.mu + s * r.nu;
  r.dominated = sgn(r.at_n_equals_one) <= 0 && sgn(r.at_n_equals_m_pow_s) <= 0;
  r.identical = sgn(r.mu) == 0 && sgn(r.nu) == 0;
  r.tight_at_boundary = sgn(r.at_n_equals_m_pow_s) == 0;

  // Exact spot checks: log m = a/b > 0 and log n = s * log m * c/e with c <= e.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> numer(1, 1'000'000);
  r.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const long top = numer(rng);
    const Rational log_m = frac(top, numer(rng));
    const long e = numer(rng);
    const Rational fraction = frac(std::uniform_int_distribution<long>(0, e)(rng), e);
    const Rational log_n = s * log_m * fraction;
    if (sgn(r.mu * log_m + r.nu * log_n) > 0) ++r.violations;
  }
  return r;
}

}  // namespace inclab
