#include "inclab/incidence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "highprec.hpp"
#include "inclab/errors.hpp"
#include "inclab/parallel.hpp"

namespace inclab {

IncidenceInstance::IncidenceInstance(std::size_t ambient_dim, std::vector<RatPoint> points,
                                     std::vector<Flat> flats, int s, int t)
    : ambient_dim_(ambient_dim), points_(std::move(points)), flats_(std::move(flats)), s_(s), t_(t) {
  if (ambient_dim_ == 0) throw InvalidInput("ambient dimension must be positive");
  if (s_ < 2) throw InvalidInput("K_{s,t} parameter s must be >= 2");
  if (t_ < 1) throw InvalidInput("K_{s,t} parameter t must be >= 1");
  for (const auto& p : points_) {
    if (p.dim() != ambient_dim_) throw InvalidInput("point dimension differs from instance");
  }
  for (const auto& f : flats_) {
    if (f.ambient_dim() != ambient_dim_) throw InvalidInput("flat dimension differs from instance");
  }
  if (points_.size() > std::numeric_limits<std::uint32_t>::max() ||
      flats_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidInput("instance too large for 32-bit indices");
  }
}

namespace {

// Hyperplanes sharing one primitive normal, bucketed by the integer key
// D * offset, where D is the common denominator of all points.
struct NormalGroup {
  std::vector<Integer> normal;
  std::unordered_map<Integer, std::vector<std::uint32_t>, IntegerHash> by_offset;
};

struct HashedLayout {
  Integer common_denominator = 1;
  std::vector<std::vector<Integer>> scaled_points;
  std::vector<NormalGroup> groups;
  std::vector<std::uint32_t> other_flats;  // not hyperplanes: tested naively
};

HashedLayout make_layout(const IncidenceInstance& inst) {
  HashedLayout layout;
  for (const auto& p : inst.points()) {
    mpz_lcm(layout.common_denominator.get_mpz_t(), layout.common_denominator.get_mpz_t(),
            p.denominator().get_mpz_t());
  }
  layout.scaled_points.reserve(inst.points().size());
  for (const auto& p : inst.points()) {
    const Integer factor = layout.common_denominator / p.denominator();
    std::vector<Integer> x = p.scaled();
    if (factor != 1) {
      for (auto& c : x) c *= factor;
    }
    layout.scaled_points.push_back(std::move(x));
  }

  std::unordered_map<std::vector<Integer>, std::size_t, IntegerVectorHash> group_of;
  for (std::uint32_t i = 0; i < inst.flats().size(); ++i) {
    const Flat& f = inst.flats()[i];
    if (!f.is_hyperplane()) {
      layout.other_flats.push_back(i);
      continue;
    }
    // Rows are stored with a positive leading coefficient, so dividing by the
    // gcd yields a canonical primitive normal.
    const auto& row = f.rows()[0];
    const Integer g = gcd_of(row);
    std::vector<Integer> normal(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) mpz_divexact(normal[j].get_mpz_t(), row[j].get_mpz_t(), g.get_mpz_t());
    // Offset is rhs / g; the point side uses D * offset, integral or unreachable.
    const Integer scaled_rhs = f.rhs()[0] * layout.common_denominator;
    if (!mpz_divisible_p(scaled_rhs.get_mpz_t(), g.get_mpz_t())) continue;
    Integer key;
    mpz_divexact(key.get_mpz_t(), scaled_rhs.get_mpz_t(), g.get_mpz_t());

    auto [it, inserted] = group_of.try_emplace(normal, layout.groups.size());
    if (inserted) layout.groups.push_back(NormalGroup{std::move(normal), {}});
    layout.groups[it->second].by_offset[key].push_back(i);
  }
  return layout;
}

void dot(const std::vector<Integer>& a, const std::vector<Integer>& b, Integer& out) {
  out = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] != 0) out += a[j] * b[j];
  }
}

// Exact pairwise membership. When every flat coefficient and every scaled
// point coordinate fits in 31 bits, the test runs on machine words with a
// 128-bit accumulator; otherwise it falls back to Flat::contains.
class PairTester {
 public:
  explicit PairTester(const IncidenceInstance& inst) : inst_(inst), d_(inst.ambient_dim()) {
    compact_ = true;
    for (const auto& p : inst.points()) {
      compact_ = compact_ && fits(p.denominator());
      for (const auto& c : p.scaled()) compact_ = compact_ && fits(c);
      if (!compact_) return;
      for (const auto& c : p.scaled()) points_.push_back(c.get_si());
      points_.push_back(p.denominator().get_si());
    }
    for (const auto& f : inst.flats()) {
      row_start_.push_back(rows_.size());
      for (std::size_t i = 0; i < f.rank(); ++i) {
        for (const auto& c : f.rows()[i]) {
          if (!fits(c)) {
            compact_ = false;
            return;
          }
          rows_.push_back(c.get_si());
        }
        if (!fits(f.rhs()[i])) {
          compact_ = false;
          return;
        }
        rows_.push_back(f.rhs()[i].get_si());
      }
    }
    row_start_.push_back(rows_.size());
  }

  bool operator()(std::size_t p, std::size_t f) const {
    if (!compact_) return inst_.flats()[f].contains(inst_.points()[p]);
    const std::int64_t* x = &points_[p * (d_ + 1)];
    for (std::size_t r = row_start_[f]; r < row_start_[f + 1]; r += d_ + 1) {
      __int128 acc = 0;
      for (std::size_t j = 0; j < d_; ++j) acc += static_cast<__int128>(rows_[r + j]) * x[j];
      if (acc != static_cast<__int128>(rows_[r + d_]) * x[d_]) return false;
    }
    return true;
  }

 private:
  static bool fits(const Integer& x) { return mpz_sizeinbase(x.get_mpz_t(), 2) <= 31; }

  const IncidenceInstance& inst_;
  std::size_t d_;
  bool compact_ = false;
  std::vector<std::int64_t> points_;   // per point: d scaled coordinates, then the denominator
  std::vector<std::int64_t> rows_;     // per row: d coefficients, then the rhs
  std::vector<std::size_t> row_start_;
};

}  // namespace

IncidenceGraph incidence_graph(const IncidenceInstance& inst, CountStrategy strategy) {
  const auto& points = inst.points();
  const auto& flats = inst.flats();
  IncidenceGraph g;
  g.flats_of_point.resize(points.size());
  g.points_of_flat.resize(flats.size());

  if (strategy == CountStrategy::naive) {
    const PairTester test(inst);
    parallel_chunks(points.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t p = begin; p < end; ++p) {
        for (std::uint32_t f = 0; f < flats.size(); ++f) {
          if (test(p, f)) g.flats_of_point[p].push_back(f);
        }
      }
    });
  } else {
    const HashedLayout layout = make_layout(inst);
    parallel_chunks(points.size(), [&](std::size_t begin, std::size_t end) {
      Integer key;
      for (std::size_t p = begin; p < end; ++p) {
        auto& out = g.flats_of_point[p];
        for (const auto& group : layout.groups) {
          dot(group.normal, layout.scaled_points[p], key);
          if (auto it = group.by_offset.find(key); it != group.by_offset.end()) {
            out.insert(out.end(), it->second.begin(), it->second.end());
          }
        }
        for (auto f : layout.other_flats) {
          if (flats[f].contains(points[p])) out.push_back(f);
        }
        std::sort(out.begin(), out.end());
      }
    });
  }

  for (std::uint32_t p = 0; p < points.size(); ++p) {
    g.edges += g.flats_of_point[p].size();
    for (auto f : g.flats_of_point[p]) g.points_of_flat[f].push_back(p);
  }
  return g;
}

std::uint64_t count_incidences(const IncidenceInstance& inst, CountStrategy strategy) {
  const auto& points = inst.points();
  const auto& flats = inst.flats();
  std::atomic<std::uint64_t> total{0};

  if (strategy == CountStrategy::naive) {
    const PairTester test(inst);
    parallel_chunks(points.size(), [&](std::size_t begin, std::size_t end) {
      std::uint64_t local = 0;
      for (std::size_t p = begin; p < end; ++p) {
        for (std::size_t f = 0; f < flats.size(); ++f) local += test(p, f) ? 1 : 0;
      }
      total += local;
    });
    return total;
  }

  const HashedLayout layout = make_layout(inst);
  parallel_chunks(points.size(), [&](std::size_t begin, std::size_t end) {
    std::uint64_t local = 0;
    Integer key;
    for (std::size_t p = begin; p < end; ++p) {
      for (const auto& group : layout.groups) {
        dot(group.normal, layout.scaled_points[p], key);
        if (auto it = group.by_offset.find(key); it != group.by_offset.end()) {
          local += it->second.size();
        }
      }
      for (auto f : layout.other_flats) local += flats[f].contains(points[p]) ? 1 : 0;
    }
    total += local;
  });
  return total;
}

// ---------------------------------------------------------------------------
// K_{s,t} search

namespace {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

// Chooses `need` vertices on the "left" side sharing at least `common`
// neighbours, depth-first in increasing index order with pruning on the
// running common neighbourhood.
class SubsetSearch {
 public:
  SubsetSearch(const Adjacency& left, const Adjacency& right, std::size_t need, std::size_t common,
               std::uint64_t limit, std::atomic<std::uint64_t>& spent)
      : left_(left), right_(right), need_(need), common_(common), limit_(limit), spent_(spent) {}

  // Witness (left vertices, common right vertices) rooted at `root`.
  std::optional<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> from_root(
      std::uint32_t root) {
    if (left_[root].size() < common_) return std::nullopt;
    chosen_.assign(1, root);
    std::optional<std::vector<std::uint32_t>> shared = extend(left_[root]);
    flush();
    if (!shared) return std::nullopt;
    shared->resize(common_);
    return std::make_pair(chosen_, std::move(*shared));
  }

 private:
  std::optional<std::vector<std::uint32_t>> extend(const std::vector<std::uint32_t>& shared) {
    if (chosen_.size() == need_) return shared;
    const std::uint32_t last = chosen_.back();
    std::vector<std::uint32_t> candidates;
    for (auto r : shared) {
      const auto& members = right_[r];
      auto it = std::upper_bound(members.begin(), members.end(), last);
      candidates.insert(candidates.end(), it, members.end());
      charge(members.size());
    }
    std::sort(candidates.begin(), candidates.end());
    charge(candidates.size());
    for (std::size_t i = 0; i < candidates.size();) {
      std::size_t j = i;
      while (j < candidates.size() && candidates[j] == candidates[i]) ++j;
      if (j - i >= common_) {
        const std::uint32_t q = candidates[i];
        std::vector<std::uint32_t> next;
        std::set_intersection(shared.begin(), shared.end(), left_[q].begin(), left_[q].end(),
                              std::back_inserter(next));
        charge(shared.size() + left_[q].size());
        chosen_.push_back(q);
        if (auto found = extend(next)) return found;
        chosen_.pop_back();
      }
      i = j;
    }
    return std::nullopt;
  }

  void charge(std::uint64_t ops) {
    pending_ += ops + 1;
    if (pending_ >= 4096) flush();
  }

  void flush() {
    const std::uint64_t total = spent_ += pending_;
    pending_ = 0;
    if (total > limit_) throw ResourceLimit("K_{s,t} search exceeded its work budget", limit_);
  }

  const Adjacency& left_;
  const Adjacency& right_;
  std::size_t need_;
  std::size_t common_;
  std::uint64_t limit_;
  std::atomic<std::uint64_t>& spent_;
  std::uint64_t pending_ = 0;
  std::vector<std::uint32_t> chosen_;
};

double log_binomial(double n, double k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

}  // namespace

std::optional<KstWitness> find_kst(const IncidenceGraph& graph, int s, int t,
                                   const KstOptions& options) {
  if (s < 2 || t < 1) throw InvalidInput("K_{s,t} search needs s >= 2 and t >= 1");
  const std::size_t m = graph.flats_of_point.size();
  const std::size_t n = graph.points_of_flat.size();

  SearchSide side = options.side;
  if (side == SearchSide::automatic) {
    const double point_cost = log_binomial(m, s) + std::log(s);
    const double flat_cost = log_binomial(n, t) + std::log(t);
    side = flat_cost < point_cost ? SearchSide::flats : SearchSide::points;
  }
  const bool by_points = side == SearchSide::points;
  const Adjacency& left = by_points ? graph.flats_of_point : graph.points_of_flat;
  const Adjacency& right = by_points ? graph.points_of_flat : graph.flats_of_point;
  const std::size_t need = static_cast<std::size_t>(by_points ? s : t);
  const std::size_t common = static_cast<std::size_t>(by_points ? t : s);

  std::atomic<std::uint64_t> spent{0};
  std::atomic<std::size_t> next_root{0};
  std::atomic<std::size_t> best_root{std::numeric_limits<std::size_t>::max()};
  std::optional<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> best;
  std::mutex best_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    SubsetSearch search(left, right, need, common, options.limit, spent);
    try {
      for (;;) {
        const std::size_t root = next_root++;
        if (root >= left.size() || root > best_root) return;
        if (auto found = search.from_root(static_cast<std::uint32_t>(root))) {
          std::lock_guard lock(best_mutex);
          if (root < best_root) {
            best_root = root;
            best = std::move(found);
          }
          return;
        }
      }
    } catch (...) {
      std::lock_guard lock(best_mutex);
      if (!failure) failure = std::current_exception();
      next_root = left.size();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(thread_count(), left.size() / 64 + 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  if (!best) return std::nullopt;

  KstWitness w;
  auto& [chosen, shared] = *best;
  auto& point_side = by_points ? chosen : shared;
  auto& flat_side = by_points ? shared : chosen;
  w.point_indices.assign(point_side.begin(), point_side.end());
  w.flat_indices.assign(flat_side.begin(), flat_side.end());
  std::sort(w.point_indices.begin(), w.point_indices.end());
  std::sort(w.flat_indices.begin(), w.flat_indices.end());
  return w;
}

std::optional<KstWitness> find_kst(const IncidenceInstance& inst, const KstOptions& options) {
  return find_kst(incidence_graph(inst), inst.s(), inst.t(), options);
}

bool verify_witness(const IncidenceInstance& inst, const KstWitness& w) {
  if (w.point_indices.size() != static_cast<std::size_t>(inst.s()) ||
      w.flat_indices.size() != static_cast<std::size_t>(inst.t())) {
    return false;
  }
  auto distinct = [](std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (!distinct(w.point_indices) || !distinct(w.flat_indices)) return false;
  for (auto p : w.point_indices) {
    if (p >= inst.points().size()) return false;
    for (auto f : w.flat_indices) {
      if (f >= inst.flats().size()) return false;
      if (!inst.flats()[f].contains(inst.points()[p])) return false;
    }
  }
  return true;
}

KstBoundValue kst_bound_value(const Integer& m, const Integer& n, int s, int digits) {
  if (m < 0 || n < 0) throw InvalidInput("KST bound needs m, n >= 0");
  if (s < 2) throw InvalidInput("KST bound needs s >= 2");
  KstBoundValue out;
  out.digits = digits;
  Integer root;
  if (m == 0 || n == 0) {
    out.exact = n;
  } else if (exact_root(n, static_cast<unsigned long>(s), root)) {
    Integer power;
    mpz_pow_ui(power.get_mpz_t(), root.get_mpz_t(), static_cast<unsigned long>(s - 1));
    out.exact = m * power + n;
  }
  if (out.exact) {
    out.value = out.exact->get_str();
  } else {
    const std::string product =
        detail::power_product({{m, Rational(1)}, {n, frac(s - 1, s)}}, digits);
    out.value = detail::add_decimal(product, n.get_str(), digits);
  }
  return out;
}

}  // namespace inclab
