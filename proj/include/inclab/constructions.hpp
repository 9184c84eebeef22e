#pragma once

// Lower-bound configurations: the lattice/primitive-normal construction for
// hyperplanes, its sphere variant, and the embedding of a hyperplane
// configuration into a higher-dimensional space with k-flats.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inclab/exponents.hpp"
#include "inclab/geometry.hpp"
#include "inclab/incidence.hpp"

namespace inclab {

enum class Variant { a, b };

struct ConstructionConfig {
  Variant variant = Variant::a;
  int d = 2;
  std::uint64_t m = 0;  // target point count
  std::uint64_t n = 0;  // target hyperplane count
  int t = 0;            // cap on selected normals per linear subspace; 0 means 2d
  std::optional<double> N;  // normal-box side; derived from (m, n) when absent
  std::uint64_t seed = 1;
  bool pad = true;      // pad with incidence-free hyperplanes up to n
  double eps_prime = 0.1;
  std::uint64_t verify_limit = 1'000'000'000;
};

struct ConstructionOutput {
  std::string kind = "plain";  // "a", "b", "embed" or "plain"
  std::size_t ambient_dim = 0;
  std::vector<RatPoint> points;
  std::vector<Flat> flats;
  std::vector<IntVector> normals_used;
  std::size_t t_measured = 0;
  bool t_verified = false;
  Integer predicted_incidences = 0;
  /// flats[padding_start..] are padding and carry no incidences.
  std::size_t padding_start = 0;
  std::vector<std::string> notes;
  std::map<std::string, std::string> parameters;
};

/// The first m points, in lexicographic order, of {0..r-1}^d with r = ceil(m^{1/d}).
std::vector<RatPoint> lattice_points(int d, std::uint64_t m);

/// Primitive vectors of the box |x_i| <= floor(N/2), one per direction (first
/// nonzero coordinate positive), in lexicographic order.
std::vector<IntVector> primitive_vectors(std::uint64_t N, int d);

struct NormalSelection {
  std::vector<IntVector> normals;
  std::size_t t_measured = 0;  // max selected vectors in one flat_dim-dim linear subspace
  bool verified = false;       // false: exhaustive check exceeded its budget, t_measured = t_max
  std::size_t target_size = 0;
  bool shortfall = false;
};

/// Seeded greedy choice of at most target_size candidates such that no linear
/// subspace of dimension flat_dim contains more than t_max of them, followed
/// by an exhaustive measurement of the actual maximum.
NormalSelection select_admissible_normals(const std::vector<IntVector>& candidates,
                                          std::size_t flat_dim, std::size_t t_max,
                                          std::size_t target_size, std::uint64_t seed,
                                          std::uint64_t limit = 1'000'000'000);

/// Normal-box side from the (m, n) balance of the hyperplane construction.
double derived_box_side(Variant variant, int d, std::uint64_t m, std::uint64_t n, double eps_prime);

ConstructionOutput build_construction_a(const ConstructionConfig& cfg);
ConstructionOutput build_construction_b(const ConstructionConfig& cfg);
ConstructionOutput build_construction(const ConstructionConfig& cfg);

/// Integer points of {0..side-1}^d at the most popular squared distance from
/// the origin (ties: smallest distance), lexicographic, truncated to m.
struct SphereBucket {
  std::vector<RatPoint> points;
  Integer radius_squared = 0;
};

SphereBucket largest_sphere_bucket(int d, std::uint64_t side, std::uint64_t m);

/// `count` new rational points on the sphere |x|^2 = radius_squared, obtained
/// by projecting seeded integer directions through anchor (a point of the
/// sphere). Each new point differs from `existing` and from the others, and
/// avoids every offset in forbidden_offsets[i] for normal i.
std::vector<RatPoint> sphere_padding_points(
    const RatPoint& anchor, const Integer& radius_squared, const std::vector<RatPoint>& existing,
    const std::vector<IntVector>& normals, const std::vector<std::vector<Rational>>& forbidden_offsets,
    std::size_t count, std::uint64_t seed);

/// Places the configuration in the d'-flat {x_j = 0, j >= d'} of R^{d_outer}
/// and replaces each hyperplane by a generic k-flat through it whose
/// intersection with that d'-flat is exactly the hyperplane.
ConstructionOutput embed_construction(const ConstructionOutput& inner, int d_outer, int k,
                                      std::uint64_t seed);

/// True when some three points lie on one line.
bool has_three_collinear(const std::vector<RatPoint>& points);

enum class KstStatus { free, witness, unverified };
std::string to_string(KstStatus status);

struct VerifyOptions {
  bool naive = true;           // also count with the O(mn) strategy
  bool collinearity = true;    // variant b: check for collinear triples when m <= collinearity_cap
  std::size_t collinearity_cap = 2000;
  std::uint64_t kst_limit = 1'000'000'000;
};

struct VerificationReport {
  std::optional<std::uint64_t> incidences_naive;
  std::uint64_t incidences_hashed = 0;
  std::uint64_t incidences_non_padding = 0;
  std::uint64_t incidences_padding = 0;
  Integer predicted_incidences = 0;
  std::optional<bool> count_law_holds;
  int s = 2;
  int t = 1;
  KstStatus kst_status = KstStatus::free;
  std::optional<KstWitness> witness;
  std::string kst_note;
  std::size_t t_measured = 0;
  bool t_verified = false;
  std::optional<bool> three_collinear;
  std::optional<ExponentPair> lower_bound_exponents;
  std::optional<ExponentPair> leading_term_exponents;
};

VerificationReport verify_construction(const ConstructionOutput& out, int s, int t,
                                       const VerifyOptions& options = {});

/// Exponents of the lower bound realised by the hyperplane constructions:
/// ((2d-2)/(2d-1), d/(2d-1)) for variant a and
/// ((3d^2-9d+2)/((d-2)(3d-1)), 2d/(3d-1)) for variant b.
ExponentPair lower_bound_exponents(Variant variant, int d);

IncidenceInstance to_instance(const ConstructionOutput& out, int s, int t);

}  // namespace inclab
