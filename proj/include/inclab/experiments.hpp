#pragma once

// Sweeps over construction sizes, log-log fits, and the command-line front end.

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "inclab/constructions.hpp"

namespace inclab {

struct SweepRung {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
};

struct SweepSpec {
  std::string construction = "a";  // "a", "b" or "embed" (embedding of an (a) configuration)
  int d = 2;                       // construction dimension; the inner dimension for "embed"
  int d_outer = 0;                 // embed only
  int k = 0;                       // embed only
  std::vector<SweepRung> ladder;
  int s = 2;
  int t = 0;  // normal cap per subspace, 0 = default; freeness is checked at t_measured + 1
  double eps_prime = 0.1;
  double eps = 0.0;  // shown next to the prediction, never used in fitting
  std::uint64_t seed = 1;
  std::string output;
  std::string instances_dir;  // when set, every rung's instance is written there
  std::uint64_t kst_limit = 1'000'000'000;
  bool naive_check = false;  // also count each rung with the naive strategy
};

SweepSpec sweep_spec_from_json(const nlohmann::json& j);
nlohmann::json sweep_spec_to_json(const SweepSpec& spec);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double residual_rms = 0;
};

/// Least squares y ~ slope * x + intercept. Throws SweepFailed when x is constant.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct PlaneFit {
  double a = 0;  // coefficient of x1
  double b = 0;  // coefficient of x2
  double c = 0;
  double residual_rms = 0;
};

/// Least squares y ~ a x1 + b x2 + c, or nullopt when (x1, x2) is
/// numerically collinear along the data.
std::optional<PlaneFit> fit_plane(const std::vector<double>& x1, const std::vector<double>& x2,
                                  const std::vector<double>& y);

struct RungRecord {
  std::size_t index = 0;
  SweepRung target;
  std::uint64_t m_actual = 0;
  std::uint64_t n_actual = 0;
  std::size_t normals = 0;
  std::uint64_t incidences = 0;
  std::optional<std::uint64_t> incidences_naive;
  std::size_t t_measured = 0;
  bool t_verified = false;
  std::string kst_status;
  double kst_ratio = 0;  // incidences / (m n^{1-1/s} + n)
  bool failed = false;
  std::string error;
  std::string instance_path;
};

struct SweepReport {
  SweepSpec spec;
  std::vector<RungRecord> rungs;
  ExponentPair predicted;
  double ratio_slope = 0;          // slope of log n against log m along the ladder targets
  double predicted_composite = 0;  // alpha + beta * ratio_slope
  LinearFit composite;             // log I against log m over successful rungs
  std::optional<PlaneFit> two_variable;
  double kst_constant = 0;  // largest kst_ratio over K_{s,t}-free rungs
  std::string generated_at;
};

SweepReport run_sweep(const SweepSpec& spec);
nlohmann::json sweep_report_to_json(const SweepReport& report);

/// Command-line entry point. `args` excludes the program name. Returns the
/// process exit code: 0 success, 1 verification finding, 2 usage or input error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace inclab
