#include "inclab/number.hpp"

#include <functional>

#include "inclab/errors.hpp"

namespace inclab {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational frac(long num, long den) { return make_rational(Integer(num), Integer(den)); }

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  Integer num;
  Integer den = 1;
  const std::string num_text = text.substr(0, slash);
  if (num_text.empty() || num.set_str(num_text, 10) != 0) {
    throw InvalidInput("malformed rational '" + text + "'");
  }
  if (slash != std::string::npos) {
    const std::string den_text = text.substr(slash + 1);
    if (den_text.empty() || den.set_str(den_text, 10) != 0) {
      throw InvalidInput("malformed rational '" + text + "'");
    }
  }
  return make_rational(num, den);
}

std::string to_string(const Integer& x) { return x.get_str(); }

std::string to_string(const Rational& x) { return x.get_str(); }

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Integer gcd_of(std::span<const Integer> xs) {
  Integer g = 0;
  for (const auto& x : xs) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

bool exact_root(const Integer& x, unsigned long s, Integer& root) {
  if (x < 0) return false;
  return mpz_root(root.get_mpz_t(), x.get_mpz_t(), s) != 0;
}

std::size_t IntegerHash::operator()(const Integer& x) const noexcept {
  const mpz_srcptr z = x.get_mpz_t();
  std::size_t h = std::hash<long>{}(static_cast<long>(z->_mp_size));
  const int limbs = z->_mp_size < 0 ? -z->_mp_size : z->_mp_size;
  for (int i = 0; i < limbs; ++i) {
    h ^= std::hash<mp_limb_t>{}(z->_mp_d[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::size_t IntegerVectorHash::operator()(const std::vector<Integer>& v) const noexcept {
  std::size_t h = v.size();
  IntegerHash hash;
  for (const auto& x : v) h ^= hash(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace inclab
