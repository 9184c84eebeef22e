#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace inclab {

using Integer = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms; throws InvalidInput when den == 0.
Rational make_rational(const Integer& num, const Integer& den);

/// num/den from machine integers, in lowest terms.
Rational frac(long num, long den);

/// Parses "p" or "p/q"; throws InvalidInput on malformed text or q == 0.
Rational parse_rational(const std::string& text);

std::string to_string(const Integer& x);
std::string to_string(const Rational& x);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/// gcd of absolute values; 0 for an all-zero (or empty) range.
Integer gcd_of(std::span<const Integer> xs);

/// Integer s-th root when x is a perfect s-th power.
bool exact_root(const Integer& x, unsigned long s, Integer& root);

struct IntegerHash {
  std::size_t operator()(const Integer& x) const noexcept;
};

struct IntegerVectorHash {
  std::size_t operator()(const std::vector<Integer>& v) const noexcept;
};

}  // namespace inclab
