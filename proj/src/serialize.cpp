#include "inclab/serialize.hpp"

#include <fstream>
#include <limits>

#include "inclab/errors.hpp"

namespace inclab {

using nlohmann::json;

namespace {

constexpr int kSchema = 1;

const json& required(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string("instance JSON lacks \"") + key + "\"");
  return *it;
}

std::vector<Rational> rational_list(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array");
  std::vector<Rational> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

}  // namespace

json integer_to_json(const Integer& x) {
  if (mpz_fits_slong_p(x.get_mpz_t())) return json(static_cast<std::int64_t>(x.get_si()));
  return json(to_string(x));
}

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
    return Integer(std::to_string(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    const Rational q = parse_rational(j.get<std::string>());
    if (q.get_den() != 1) throw InvalidInput("expected an integer, got " + j.get<std::string>());
    return q.get_num();
  }
  throw InvalidInput("expected an integer, got " + j.dump());
}

json rational_to_json(const Rational& x) {
  return json::array({integer_to_json(x.get_num()), integer_to_json(x.get_den())});
}

Rational rational_from_json(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw InvalidInput("rational must be a [numerator, denominator] pair");
    return make_rational(integer_from_json(j[0]), integer_from_json(j[1]));
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(integer_from_json(j));
  throw InvalidInput("expected a rational, got " + j.dump());
}

json instance_to_json(const ConstructionOutput& out) {
  json j;
  j["schema"] = kSchema;
  j["ambient_dim"] = out.ambient_dim;
  json points = json::array();
  for (const auto& p : out.points) {
    json row = json::array();
    for (const auto& c : p.coords()) row.push_back(rational_to_json(c));
    points.push_back(std::move(row));
  }
  j["points"] = std::move(points);
  json flats = json::array();
  for (const auto& f : out.flats) {
    json a = json::array();
    for (const auto& r : f.rows()) {
      json row = json::array();
      for (const auto& c : r) row.push_back(rational_to_json(Rational(c)));
      a.push_back(std::move(row));
    }
    json b = json::array();
    for (const auto& c : f.rhs()) b.push_back(rational_to_json(Rational(c)));
    flats.push_back({{"A", std::move(a)}, {"b", std::move(b)}});
  }
  j["flats"] = std::move(flats);

  json c;
  c["kind"] = out.kind;
  json normals = json::array();
  for (const auto& v : out.normals_used) {
    json row = json::array();
    for (const auto& x : v.coords()) row.push_back(integer_to_json(x));
    normals.push_back(std::move(row));
  }
  c["normals_used"] = std::move(normals);
  c["t_measured"] = out.t_measured;
  c["t_verified"] = out.t_verified;
  c["predicted_incidences"] = integer_to_json(out.predicted_incidences);
  c["padding_start"] = out.padding_start;
  c["notes"] = out.notes;
  c["parameters"] = out.parameters;
  j["construction"] = std::move(c);
  return j;
}

ConstructionOutput instance_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("instance JSON must be an object");
  if (j.contains("schema") && j["schema"] != kSchema) {
    throw InvalidInput("unsupported instance schema " + j["schema"].dump());
  }
  ConstructionOutput out;
  const json& points = required(j, "points");
  const json& flats = required(j, "flats");
  if (!points.is_array() || !flats.is_array()) throw InvalidInput("points and flats must be arrays");

  if (j.contains("ambient_dim")) {
    out.ambient_dim = j["ambient_dim"].get<std::size_t>();
  } else if (!points.empty()) {
    out.ambient_dim = points[0].size();
  } else if (!flats.empty() && !required(flats[0], "A").empty()) {
    out.ambient_dim = flats[0]["A"][0].size();
  } else {
    throw InvalidInput("cannot infer ambient_dim from an empty instance");
  }
  const std::size_t d = out.ambient_dim;
  if (d == 0) throw InvalidInput("ambient_dim must be positive");

  for (const auto& p : points) {
    auto coords = rational_list(p, "point");
    if (coords.size() != d) throw InvalidInput("point dimension differs from ambient_dim");
    out.points.emplace_back(std::move(coords));
  }
  for (const auto& f : flats) {
    const json& a = required(f, "A");
    RationalVector b = rational_list(required(f, "b"), "flat rhs");
    if (!a.is_array() || a.size() != b.size()) throw InvalidInput("flat A and b sizes differ");
    RationalMatrix rows;
    for (const auto& r : a) {
      auto row = rational_list(r, "flat row");
      if (row.size() != d) throw InvalidInput("flat row length differs from ambient_dim");
      rows.push_back(std::move(row));
    }
    out.flats.push_back(Flat::from_equations(d, rows, b));
  }
  out.padding_start = out.flats.size();

  if (j.contains("construction")) {
    const json& c = j["construction"];
    out.kind = c.value("kind", std::string("plain"));
    if (c.contains("normals_used")) {
      for (const auto& v : c["normals_used"]) {
        std::vector<Integer> coords;
        for (const auto& x : v) coords.push_back(integer_from_json(x));
        out.normals_used.emplace_back(std::move(coords));
      }
    }
    out.t_measured = c.value("t_measured", std::size_t{0});
    out.t_verified = c.value("t_verified", false);
    if (c.contains("predicted_incidences")) {
      out.predicted_incidences = integer_from_json(c["predicted_incidences"]);
    }
    out.padding_start = c.value("padding_start", out.flats.size());
    if (out.padding_start > out.flats.size()) throw InvalidInput("padding_start exceeds flat count");
    if (c.contains("notes")) out.notes = c["notes"].get<std::vector<std::string>>();
    if (c.contains("parameters")) {
      out.parameters = c["parameters"].get<std::map<std::string, std::string>>();
    }
  }
  return out;
}

ConstructionOutput read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_instance_file(const std::string& path, const ConstructionOutput& out) {
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write " + path);
  os << instance_to_json(out).dump() << '\n';
  if (!os) throw InvalidInput("write failed: " + path);
}

json exponent_pair_to_json(const ExponentPair& p) {
  return {{"m", to_string(p.m_exponent)}, {"n", to_string(p.n_exponent)}};
}

json report_to_json(const VerificationReport& r) {
  json j;
  j["schema"] = kSchema;
  if (r.incidences_naive) j["incidences_naive"] = *r.incidences_naive;
  j["incidences_hashed"] = r.incidences_hashed;
  j["incidences_non_padding"] = r.incidences_non_padding;
  j["incidences_padding"] = r.incidences_padding;
  j["predicted_incidences"] = to_string(r.predicted_incidences);
  if (r.count_law_holds) j["count_law_holds"] = *r.count_law_holds;
  j["s"] = r.s;
  j["t"] = r.t;
  j["kst_status"] = to_string(r.kst_status);
  if (r.witness) {
    j["witness"] = {{"points", r.witness->point_indices}, {"flats", r.witness->flat_indices}};
  }
  if (!r.kst_note.empty()) j["kst_note"] = r.kst_note;
  j["t_measured"] = r.t_measured;
  j["t_verified"] = r.t_verified;
  if (r.three_collinear) j["three_collinear"] = *r.three_collinear;
  if (r.lower_bound_exponents) j["lower_bound_exponents"] = exponent_pair_to_json(*r.lower_bound_exponents);
  if (r.leading_term_exponents) {
    j["leading_term_exponents"] = exponent_pair_to_json(*r.leading_term_exponents);
  }
  return j;
}

}  // namespace inclab
