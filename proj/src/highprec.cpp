#include "highprec.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "inclab/errors.hpp"

namespace inclab::detail {

namespace {

using Decimal = boost::multiprecision::cpp_dec_float_50;

Decimal to_decimal(const Integer& x) { return Decimal(x.get_str()); }

Decimal to_decimal(const Rational& x) {
  return to_decimal(x.get_num()) / to_decimal(x.get_den());
}

void check_digits(int digits) {
  if (digits < 1 || digits > 40) throw InvalidInput("precision must be between 1 and 40 digits");
}

}  // namespace

std::string power_product(const std::vector<std::pair<Integer, Rational>>& factors, int digits) {
  check_digits(digits);
  Decimal log_sum = 0;
  for (const auto& [base, exponent] : factors) {
    if (base <= 0) throw InvalidInput("power base must be positive");
    if (sgn(exponent) == 0) continue;
    log_sum += to_decimal(exponent) * boost::multiprecision::log(to_decimal(base));
  }
  return Decimal(boost::multiprecision::exp(log_sum)).str(digits);
}

std::string add_decimal(const std::string& a, const std::string& b, int digits) {
  check_digits(digits);
  return Decimal(Decimal(a) + Decimal(b)).str(digits);
}

}  // namespace inclab::detail
