#pragma once

// Reporting-edge evaluation of products of rational powers.

#include <string>
#include <utility>
#include <vector>

#include "inclab/number.hpp"

namespace inclab::detail {

/// prod base_i^{exp_i} to `digits` significant digits (digits <= 40).
/// Bases must be positive.
std::string power_product(const std::vector<std::pair<Integer, Rational>>& factors, int digits);

/// a + b where both are decimal renderings; used to add exact integers to
/// high-precision values.
std::string add_decimal(const std::string& a, const std::string& b, int digits);

}  // namespace inclab::detail
