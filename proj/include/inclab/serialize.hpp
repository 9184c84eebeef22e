#pragma once

// The .inc.json instance format: points as arrays of [numerator, denominator]
// pairs, flats as {"A": rows, "b": rhs}, plus optional construction metadata.
// Numbers that fit in 64 bits are written as JSON integers, larger ones as
// decimal strings; the reader accepts both, and "p/q" strings as well.

#include <json.hpp>

#include <string>

#include "inclab/constructions.hpp"

namespace inclab {

nlohmann::json rational_to_json(const Rational& x);
Rational rational_from_json(const nlohmann::json& j);

nlohmann::json integer_to_json(const Integer& x);
Integer integer_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const ConstructionOutput& out);
ConstructionOutput instance_from_json(const nlohmann::json& j);

ConstructionOutput read_instance_file(const std::string& path);
void write_instance_file(const std::string& path, const ConstructionOutput& out);

nlohmann::json exponent_pair_to_json(const ExponentPair& p);
nlohmann::json report_to_json(const VerificationReport& r);

}  // namespace inclab
