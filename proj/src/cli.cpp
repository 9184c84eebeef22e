#include <CLI11.hpp>

#include <fstream>
#include <ostream>

#include "inclab/errors.hpp"
#include "inclab/experiments.hpp"
#include "inclab/serialize.hpp"

namespace inclab {

using nlohmann::json;

namespace {

json pair_json(const DimPair& p) { return json::array({p.k, p.d}); }

json term_json(const SignificantSequence& seq, int s, bool& mismatch) {
  json pairs = json::array();
  for (const auto& p : seq.pairs()) pairs.push_back(pair_json(p));
  const BoundTerm closed = term_from_closed_form(seq, s);
  std::string check = "ok";
  try {
    if (!(solve_exponent_system(seq, s) == closed)) check = "mismatch";
  } catch (const Degenerate&) {
    check = "singular";
  }
  if (check != "ok") mismatch = true;
  json q = json::array();
  for (const auto& [pair, e] : closed.q_exponents) {
    q.push_back({{"pair", pair_json(pair)}, {"exponent", to_string(e)}});
  }
  return {{"sequence", std::move(pairs)},
          {"alpha", to_string(closed.alpha)},
          {"beta", to_string(closed.beta)},
          {"q_exponents", std::move(q)},
          {"cross_check", check},
          {"findings", exponent_range_findings(closed, s)}};
}

int run_exponents(int k, int d, int s, bool restricted, bool as_json, std::ostream& out) {
  const DimPair head(k, d);
  if (s < 2) throw InvalidInput("s must be >= 2");
  bool mismatch = false;
  json terms = json::array();
  for (const auto& seq : enumerate_S(k, d, restricted)) terms.push_back(term_json(seq, s, mismatch));
  json r = json::array();
  for (const auto& p : compute_R(k, d)) r.push_back(pair_json(p));
  const ExponentPair lead = leading_exponents(k, d, s);

  if (as_json) {
    json j = {{"schema", 1},        {"k", k}, {"d", d}, {"s", s}, {"restricted", restricted},
              {"R", std::move(r)},  {"terms", terms},
              {"leading_term", exponent_pair_to_json(lead)}};
    if (2 * k <= d) {
      json rb = json::array();
      for (const auto& p : compute_R_bar(k, d)) rb.push_back(pair_json(p));
      j["R_bar"] = std::move(rb);
    }
    out << j.dump(2) << '\n';
  } else {
    out << "S" << (restricted ? "_bar" : "") << "_{" << k << "," << d << "} at s=" << s << ": "
        << terms.size() << " sequences\n";
    for (const auto& t : terms) {
      std::string seq;
      for (const auto& p : t["sequence"]) {
        seq += (seq.empty() ? "(" : ",(") + std::to_string(p[0].get<int>()) + "," +
               std::to_string(p[1].get<int>()) + ")";
      }
      out << "  (" << seq << "): alpha=" << t["alpha"].get<std::string>()
          << " beta=" << t["beta"].get<std::string>();
      for (const auto& q : t["q_exponents"]) {
        out << " q(" << q["pair"][0] << "," << q["pair"][1] << ")^" << q["exponent"].get<std::string>();
      }
      out << " [" << t["cross_check"].get<std::string>() << "]\n";
      for (const auto& f : t["findings"]) out << "    finding: " << f.get<std::string>() << '\n';
    }
    out << "T_{" << k << "," << d << "}: m^" << to_string(lead.m_exponent) << " n^"
        << to_string(lead.n_exponent) << '\n';
  }
  return mismatch ? 1 : 0;
}

json summary_json(const ConstructionOutput& c, const std::string& path) {
  return {{"file", path},
          {"kind", c.kind},
          {"ambient_dim", c.ambient_dim},
          {"points", c.points.size()},
          {"flats", c.flats.size()},
          {"padding_start", c.padding_start},
          {"normals", c.normals_used.size()},
          {"t_measured", c.t_measured},
          {"t_verified", c.t_verified},
          {"predicted_incidences", to_string(c.predicted_incidences)},
          {"notes", c.notes}};
}

void write_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write " + path);
  os << j.dump(2) << '\n';
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact point/flat incidence experiments"};
  app.name("inclab");
  app.require_subcommand(1);

  int k = 0, d = 0, s = 2, t = 0, d_outer = 0;
  bool restricted = false, as_json = false, no_pad = false, no_naive = false;
  std::string variant = "a", output, file, sweep_file;
  std::uint64_t m = 0, n = 0, seed = 1, limit = 1'000'000'000;
  double eps_prime = 0.1;
  std::optional<double> box_side;
  std::optional<int> verify_t;

  auto* exponents = app.add_subcommand("exponents", "Significant sequences and bound-term exponents");
  exponents->add_option("--k", k, "Flat dimension")->required();
  exponents->add_option("--d", d, "Ambient dimension")->required();
  exponents->add_option("--s", s, "Forbidden K_{s,t} parameter s")->required();
  exponents->add_flag("--restricted", restricted, "Restrict to sequences through R_bar");
  exponents->add_flag("--json", as_json, "Emit JSON");

  auto* construct = app.add_subcommand("construct", "Build a lower-bound configuration");
  construct->add_option("--variant", variant, "a or b")->check(CLI::IsMember({"a", "b"}));
  construct->add_option("--d", d, "Ambient dimension")->required();
  construct->add_option("--m", m, "Target point count")->required();
  construct->add_option("--n", n, "Target hyperplane count")->required();
  construct->add_option("--seed", seed, "Random seed");
  construct->add_option("--t", t, "Normals allowed per subspace (0: 2d)");
  construct->add_option("--N", box_side, "Normal-box side (default: derived from m, n)");
  construct->add_option("--eps-prime", eps_prime, "Exponent slack in the box-side formula");
  construct->add_flag("--no-pad", no_pad, "Do not pad with incidence-free hyperplanes");
  construct->add_option("-o,--output", output, "Instance file (.inc.json)")->required();

  auto* verify = app.add_subcommand("verify", "Recount incidences and search for K_{s,t}");
  verify->add_option("file", file, "Instance file")->required();
  verify->add_option("--s", s, "K_{s,t} parameter s");
  verify->add_option("--t", verify_t, "K_{s,t} parameter t (default: t_measured + 1)");
  verify->add_option("--limit", limit, "Search budget in elementary operations");
  verify->add_flag("--no-naive", no_naive, "Skip the naive recount");

  auto* embed = app.add_subcommand("embed", "Embed a hyperplane configuration with k-flats");
  embed->add_option("file", file, "Instance file")->required();
  embed->add_option("--d-outer", d_outer, "Target ambient dimension")->required();
  embed->add_option("--k", k, "Dimension of the extended flats")->required();
  embed->add_option("--seed", seed, "Random seed");
  embed->add_option("-o,--output", output, "Instance file (.inc.json)")->required();

  auto* sweep = app.add_subcommand("sweep", "Run a size ladder and fit log-log slopes");
  sweep->add_option("spec", sweep_file, "Sweep spec (JSON)")->required();
  sweep->add_option("-o,--output", output, "Report file (default: spec output or stdout)");

  auto* oracle = app.add_subcommand("oracle", "Reference computations");
  oracle->require_subcommand(1);
  auto* oracle_count = oracle->add_subcommand("count", "Naive incidence count");
  oracle_count->add_option("file", file, "Instance file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*exponents) return run_exponents(k, d, s, restricted, as_json, out);

    if (*construct) {
      ConstructionConfig cfg;
      cfg.variant = variant == "b" ? Variant::b : Variant::a;
      cfg.d = d;
      cfg.m = m;
      cfg.n = n;
      cfg.t = t;
      cfg.N = box_side;
      cfg.seed = seed;
      cfg.pad = !no_pad;
      cfg.eps_prime = eps_prime;
      const ConstructionOutput c = build_construction(cfg);
      write_instance_file(output, c);
      out << summary_json(c, output).dump(2) << '\n';
      return 0;
    }

    if (*verify) {
      const ConstructionOutput c = read_instance_file(file);
      const int tt = verify_t ? *verify_t : static_cast<int>(c.t_measured) + 1;
      VerifyOptions opts;
      opts.naive = !no_naive;
      opts.kst_limit = limit;
      const VerificationReport r = verify_construction(c, s, tt, opts);
      out << report_to_json(r).dump(2) << '\n';
      const bool bad_count = (r.incidences_naive && *r.incidences_naive != r.incidences_hashed) ||
                             (r.count_law_holds && !*r.count_law_holds) ||
                             (r.three_collinear && *r.three_collinear && c.kind == "b");
      return r.kst_status == KstStatus::witness || bad_count ? 1 : 0;
    }

    if (*embed) {
      const ConstructionOutput inner = read_instance_file(file);
      const ConstructionOutput c = embed_construction(inner, d_outer, k, seed);
      write_instance_file(output, c);
      out << summary_json(c, output).dump(2) << '\n';
      return 0;
    }

    if (*sweep) {
      std::ifstream in(sweep_file);
      if (!in) throw InvalidInput("cannot open " + sweep_file);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw InvalidInput(sweep_file + ": " + e.what());
      }
      const SweepSpec spec = sweep_spec_from_json(j);
      const SweepReport report = run_sweep(spec);
      write_json(sweep_report_to_json(report), output.empty() ? spec.output : output, out);
      return 0;
    }

    if (*oracle_count) {
      const ConstructionOutput c = read_instance_file(file);
      out << count_incidences(to_instance(c, 2, 1), CountStrategy::naive) << '\n';
      return 0;
    }
  } catch (const SweepFailed& e) {
    err << "sweep failed: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << app.help();
  return 2;
}

}  // namespace inclab
