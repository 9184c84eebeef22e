#pragma once

// Exact incidence counting and K_{s,t} detection in point/flat incidence graphs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "inclab/geometry.hpp"

namespace inclab {

class IncidenceInstance {
 public:
  IncidenceInstance(std::size_t ambient_dim, std::vector<RatPoint> points, std::vector<Flat> flats,
                    int s = 2, int t = 1);

  std::size_t ambient_dim() const { return ambient_dim_; }
  const std::vector<RatPoint>& points() const { return points_; }
  const std::vector<Flat>& flats() const { return flats_; }
  int s() const { return s_; }
  int t() const { return t_; }

 private:
  std::size_t ambient_dim_;
  std::vector<RatPoint> points_;
  std::vector<Flat> flats_;
  int s_;
  int t_;
};

enum class CountStrategy {
  naive,   // every (point, flat) pair tested by exact membership
  hashed,  // hyperplanes grouped by normal, points bucketed by exact dot product
};

std::uint64_t count_incidences(const IncidenceInstance& inst,
                               CountStrategy strategy = CountStrategy::hashed);

/// Adjacency lists of the incidence graph, both directions, indices sorted.
struct IncidenceGraph {
  std::vector<std::vector<std::uint32_t>> flats_of_point;
  std::vector<std::vector<std::uint32_t>> points_of_flat;
  std::uint64_t edges = 0;
};

IncidenceGraph incidence_graph(const IncidenceInstance& inst,
                               CountStrategy strategy = CountStrategy::hashed);

struct KstWitness {
  std::vector<std::size_t> point_indices;
  std::vector<std::size_t> flat_indices;
};

enum class SearchSide { automatic, points, flats };

struct KstOptions {
  std::uint64_t limit = 1'000'000'000;  // elementary comparisons
  SearchSide side = SearchSide::automatic;
};

/// Some s points of the instance lying on t common flats, or nullopt. Among
/// several witnesses, the one rooted at the lowest index on the searched
/// side is returned. Throws ResourceLimit when the search exceeds the budget.
std::optional<KstWitness> find_kst(const IncidenceInstance& inst, const KstOptions& options = {});

/// Same search on a prebuilt incidence graph.
std::optional<KstWitness> find_kst(const IncidenceGraph& graph, int s, int t,
                                   const KstOptions& options = {});

/// Rechecks every (point, flat) pair of the witness by exact membership.
bool verify_witness(const IncidenceInstance& inst, const KstWitness& w);

/// m * n^{1-1/s} + n. `exact` is set when n is a perfect s-th power; `value`
/// always carries the number to `digits` significant digits.
struct KstBoundValue {
  std::optional<Integer> exact;
  std::string value;
  int digits = 30;
};

KstBoundValue kst_bound_value(const Integer& m, const Integer& n, int s, int digits = 30);

}  // namespace inclab
