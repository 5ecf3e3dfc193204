#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "curvebody/diagnostics.hpp"
#include "curvebody/integrator.hpp"
#include "curvebody/model.hpp"

namespace curvebody::io {

inline constexpr const char* kSchemaVersion = "1";

/// Everything needed to reproduce one run. Parsed from a JSON document with
/// "schema_version": "1".
struct RunConfig {
  explicit RunConfig(PolygonConfig p) : polygon(std::move(p)) {}

  PolygonConfig polygon;
  double rho0 = 0.0;
  double rho_dot0 = 0.0;
  double theta_dot0 = 0.0;
  SynthesisOptions synthesis;
  /// synthesize_initial(polygon, rho0, rho_dot0, theta_dot0, synthesis).
  ReducedState initial;
  IntegrationSettings settings;
  double t0 = 0.0;
  double t1 = 10.0;
  std::vector<double> rho_grid;
  double tol_b = kDefaultCriterionTol;
  double tol_c = kDefaultCriterionTol;
  double max_deviation = 1e-6;
  std::optional<std::filesystem::path> out_dir;
  bool force = false;
  bool strict_b = false;
  bool project = false;
};

/// Throws ValidationError (or a subclass) on any schema or invariant violation, including
/// an initial state that synthesize_initial rejects.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

enum class MassMode { equal, random };

struct ScanConfig {
  int n_min = 2;
  int n_max = 8;
  int k = 3;
  MassMode mass_mode = MassMode::equal;
  std::vector<double> perturbations;
  std::vector<int> sigmas;
  std::vector<double> rho_grid;  // per-sigma default when empty
  double tol_b = kDefaultCriterionTol;
  double tol_c = kDefaultCriterionTol;
  std::uint64_t seed = 1;
};

ScanConfig parse_scan_config(const nlohmann::json& doc);
ScanConfig load_scan_config(const std::filesystem::path& path);

/// Shortest decimal string that round-trips the double.
std::string format_double(double x);

nlohmann::json to_json(const CriterionReport& report, const PolygonConfig& config);
nlohmann::json to_json(const Termination& termination);

/// Header plus one row per sample; reduced columns are
/// time, rho, rho_dot, theta, theta_dot, z_1.., zdot_1..; full columns are
/// time, q_<i>_<c>... then qdot_<i>_<c>... (body-major, 1-based).
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, RunKind kind,
                          const PolygonConfig& config);
std::vector<std::string> trajectory_header(RunKind kind, const PolygonConfig& config);

/// Extremes and drifts of a conservation series, plus the termination record.
nlohmann::json summarize(const ConservationSeries& series, const Trajectory& trajectory,
                         RunKind kind, const PolygonConfig& config);

/// Throws ValidationError when the document lacks the expected schema_version.
void require_schema(const nlohmann::json& doc);

}  // namespace curvebody::io
