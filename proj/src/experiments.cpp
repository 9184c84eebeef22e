#include "inclab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <set>

#include "inclab/errors.hpp"
#include "inclab/serialize.hpp"

namespace inclab {

using nlohmann::json;

namespace {

template <class T>
T get_field(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("sweep spec field \"") + key + "\" has the wrong type");
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void validate_ladder(const std::vector<SweepRung>& ladder) {
  if (ladder.size() < 3) throw SweepFailed("a sweep needs at least 3 ladder rungs");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i].m < 1 || ladder[i].n < 1) throw SweepFailed("ladder sizes must be positive");
    if (i == 0) continue;
    const auto& a = ladder[i - 1];
    const auto& b = ladder[i];
    const bool grows = b.m >= a.m && b.n >= a.n && (b.m > a.m || b.n > a.n);
    if (!grows) throw SweepFailed("ladder sizes must be strictly increasing");
  }
}

RungRecord run_rung(const SweepSpec& spec, std::size_t index) {
  RungRecord rec;
  rec.index = index;
  rec.target = spec.ladder[index];
  try {
    ConstructionConfig cfg;
    cfg.variant = spec.construction == "b" ? Variant::b : Variant::a;
    cfg.d = spec.d;
    cfg.m = rec.target.m;
    cfg.n = rec.target.n;
    cfg.t = spec.t;
    cfg.seed = spec.seed;
    cfg.eps_prime = spec.eps_prime;
    ConstructionOutput out = build_construction(cfg);
    if (spec.construction == "embed") out = embed_construction(out, spec.d_outer, spec.k, spec.seed);

    rec.m_actual = out.points.size();
    rec.n_actual = out.flats.size();
    rec.normals = out.normals_used.size();
    rec.t_measured = out.t_measured;
    rec.t_verified = out.t_verified;

    const int t = static_cast<int>(out.t_measured) + 1;
    const IncidenceInstance inst = to_instance(out, spec.s, t);
    const IncidenceGraph graph = incidence_graph(inst, CountStrategy::hashed);
    rec.incidences = graph.edges;
    if (spec.naive_check) rec.incidences_naive = count_incidences(inst, CountStrategy::naive);
    const auto bound = kst_bound_value(Integer(static_cast<unsigned long>(rec.m_actual)),
                                       Integer(static_cast<unsigned long>(rec.n_actual)), spec.s);
    rec.kst_ratio = static_cast<double>(rec.incidences) / std::stod(bound.value);
    try {
      KstOptions opts;
      opts.limit = spec.kst_limit;
      rec.kst_status = to_string(find_kst(graph, spec.s, t, opts) ? KstStatus::witness : KstStatus::free);
    } catch (const ResourceLimit&) {
      rec.kst_status = to_string(KstStatus::unverified);
    }
    if (!spec.instances_dir.empty()) {
      std::filesystem::create_directories(spec.instances_dir);
      rec.instance_path =
          (std::filesystem::path(spec.instances_dir) / ("rung_" + std::to_string(index) + ".inc.json"))
              .string();
      write_instance_file(rec.instance_path, out);
    }
    if (rec.incidences == 0) {
      rec.failed = true;
      rec.error = "no incidences; log-log fit undefined";
    }
  } catch (const Error& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

json fit_to_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"residual_rms", f.residual_rms}};
}

}  // namespace

SweepSpec sweep_spec_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("sweep spec must be a JSON object");
  static const std::set<std::string> known = {
      "schema", "construction", "d",    "d_outer", "k",      "ladder",        "s",
      "t",      "eps_prime",    "eps",  "seed",    "output", "instances_dir", "kst_limit",
      "naive_check"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw InvalidInput("unknown sweep spec field \"" + key + "\"");
  }
  SweepSpec spec;
  spec.construction = get_field(j, "construction", spec.construction);
  if (spec.construction != "a" && spec.construction != "b" && spec.construction != "embed") {
    throw InvalidInput("construction must be a, b or embed");
  }
  spec.d = get_field(j, "d", spec.d);
  spec.d_outer = get_field(j, "d_outer", spec.d_outer);
  spec.k = get_field(j, "k", spec.k);
  if (spec.construction == "embed" && (spec.d_outer <= spec.d || spec.k < spec.d - 1 ||
                                       spec.k >= spec.d_outer)) {
    throw InvalidInput("embed sweeps need d < d_outer and d - 1 <= k < d_outer");
  }
  spec.s = get_field(j, "s", spec.s);
  spec.t = get_field(j, "t", spec.t);
  spec.eps_prime = get_field(j, "eps_prime", spec.eps_prime);
  spec.eps = get_field(j, "eps", spec.eps);
  spec.seed = get_field(j, "seed", spec.seed);
  spec.output = get_field(j, "output", spec.output);
  spec.instances_dir = get_field(j, "instances_dir", spec.instances_dir);
  spec.kst_limit = get_field(j, "kst_limit", spec.kst_limit);
  spec.naive_check = get_field(j, "naive_check", spec.naive_check);
  if (spec.s < 2) throw InvalidInput("s must be >= 2");

  const auto it = j.find("ladder");
  if (it == j.end() || !it->is_array()) throw InvalidInput("sweep spec needs a \"ladder\" array");
  for (const auto& r : *it) {
    SweepRung rung;
    if (r.is_array() && r.size() == 2) {
      rung.m = r[0].get<std::uint64_t>();
      rung.n = r[1].get<std::uint64_t>();
    } else if (r.is_object()) {
      rung.m = r.at("m").get<std::uint64_t>();
      rung.n = r.at("n").get<std::uint64_t>();
    } else {
      throw InvalidInput("ladder entries are [m, n] pairs or {\"m\":, \"n\":} objects");
    }
    spec.ladder.push_back(rung);
  }
  return spec;
}

json sweep_spec_to_json(const SweepSpec& spec) {
  json ladder = json::array();
  for (const auto& r : spec.ladder) ladder.push_back({r.m, r.n});
  json j = {{"construction", spec.construction},
            {"d", spec.d},
            {"ladder", std::move(ladder)},
            {"s", spec.s},
            {"t", spec.t},
            {"eps_prime", spec.eps_prime},
            {"eps", spec.eps},
            {"seed", spec.seed},
            {"kst_limit", spec.kst_limit},
            {"naive_check", spec.naive_check}};
  if (spec.construction == "embed") {
    j["d_outer"] = spec.d_outer;
    j["k"] = spec.k;
  }
  if (!spec.output.empty()) j["output"] = spec.output;
  if (!spec.instances_dir.empty()) j["instances_dir"] = spec.instances_dir;
  return j;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw SweepFailed("line fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 1e-12 * (1 + mx * mx))) throw SweepFailed("degenerate fit: x does not vary");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / n);
  return f;
}

std::optional<PlaneFit> fit_plane(const std::vector<double>& x1, const std::vector<double>& x2,
                                  const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (x1.size() != n || x2.size() != n || n < 3) return std::nullopt;
  double m1 = 0, m2 = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m1 += x1[i];
    m2 += x2[i];
    my += y[i];
  }
  m1 /= n;
  m2 /= n;
  my /= n;
  double s11 = 0, s12 = 0, s22 = 0, s1y = 0, s2y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x1[i] - m1, b = x2[i] - m2, c = y[i] - my;
    s11 += a * a;
    s12 += a * b;
    s22 += b * b;
    s1y += a * c;
    s2y += b * c;
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(det > 1e-9 * s11 * s22) || s11 <= 0 || s22 <= 0) return std::nullopt;
  PlaneFit f;
  f.a = (s1y * s22 - s2y * s12) / det;
  f.b = (s2y * s11 - s1y * s12) / det;
  f.c = my - f.a * m1 - f.b * m2;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.a * x1[i] + f.b * x2[i] + f.c);
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / n);
  return f;
}

SweepReport run_sweep(const SweepSpec& spec) {
  validate_ladder(spec.ladder);
  SweepReport report;
  report.spec = spec;
  report.generated_at = utc_timestamp();
  const int pred_dim = spec.d;
  report.predicted = lower_bound_exponents(spec.construction == "b" ? Variant::b : Variant::a, pred_dim);

  std::vector<double> tm, tn;
  for (const auto& r : spec.ladder) {
    tm.push_back(std::log(static_cast<double>(r.m)));
    tn.push_back(std::log(static_cast<double>(r.n)));
  }
  report.ratio_slope = fit_line(tm, tn).slope;
  report.predicted_composite =
      report.predicted.m_exponent.get_d() + report.predicted.n_exponent.get_d() * report.ratio_slope;

  for (std::size_t i = 0; i < spec.ladder.size(); ++i) report.rungs.push_back(run_rung(spec, i));

  std::vector<double> lm, ln, li;
  for (const auto& r : report.rungs) {
    if (r.failed) continue;
    lm.push_back(std::log(static_cast<double>(r.m_actual)));
    ln.push_back(std::log(static_cast<double>(r.n_actual)));
    li.push_back(std::log(static_cast<double>(r.incidences)));
  }
  if (li.size() < 3) {
    throw SweepFailed("only " + std::to_string(li.size()) + " rungs succeeded; 3 are needed");
  }
  report.composite = fit_line(lm, li);
  for (const auto& r : report.rungs) {
    if (!r.failed && r.kst_status == "free") report.kst_constant = std::max(report.kst_constant, r.kst_ratio);
  }
  report.two_variable = fit_plane(lm, ln, li);
  return report;
}

json sweep_report_to_json(const SweepReport& r) {
  json rungs = json::array();
  for (const auto& g : r.rungs) {
    json j = {{"index", g.index},         {"m_target", g.target.m},    {"n_target", g.target.n},
              {"failed", g.failed}};
    if (g.failed) {
      j["error"] = g.error;
    } else {
      j["m_actual"] = g.m_actual;
      j["n_actual"] = g.n_actual;
      j["normals"] = g.normals;
      j["incidences"] = g.incidences;
      if (g.incidences_naive) j["incidences_naive"] = *g.incidences_naive;
      j["t_measured"] = g.t_measured;
      j["t_verified"] = g.t_verified;
      j["kst_status"] = g.kst_status;
      j["kst_ratio"] = g.kst_ratio;
      if (!g.instance_path.empty()) j["instance"] = g.instance_path;
    }
    rungs.push_back(std::move(j));
  }
  json fit = {{"composite", fit_to_json(r.composite)}};
  if (r.two_variable) {
    fit["two_variable"] = {{"m_slope", r.two_variable->a},
                           {"n_slope", r.two_variable->b},
                           {"intercept", r.two_variable->c},
                           {"residual_rms", r.two_variable->residual_rms}};
  } else {
    fit["two_variable"] = nullptr;
  }
  json predicted = exponent_pair_to_json(r.predicted);
  predicted["eps"] = r.spec.eps;
  predicted["ratio_slope"] = r.ratio_slope;
  predicted["composite_slope"] = r.predicted_composite;
  return {{"schema", 1},
          {"generated_at", r.generated_at},
          {"spec", sweep_spec_to_json(r.spec)},
          {"predicted", std::move(predicted)},
          {"rungs", std::move(rungs)},
          {"fit", std::move(fit)},
          {"delta", r.composite.slope - r.predicted_composite},
          {"kst_constant", r.kst_constant}};
}

}  // namespace inclab
