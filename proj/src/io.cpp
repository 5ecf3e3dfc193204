#include "curvebody/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "curvebody/dynamics.hpp"
#include "curvebody/errors.hpp"

namespace curvebody::io {

using nlohmann::json;

void require_schema(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  const auto it = doc.find("schema_version");
  if (it == doc.end() || !it->is_string() || it->get<std::string>() != kSchemaVersion) {
    throw ValidationError(std::string("config must carry \"schema_version\": \"") +
                          kSchemaVersion + "\"");
  }
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) throw ValidationError("unknown key \"" + key + "\" in " + where);
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : it->get<T>();
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  require_schema(doc);
  reject_unknown_keys(doc,
                      {"schema_version", "sigma", "k", "masses", "beta", "regular", "initial",
                       "z_sign", "z_direction", "integration", "t_span", "criterion",
                       "cross_validation", "output_dir", "flags"},
                      "config");
  try {
    const CurvatureSign sigma = CurvatureSign::from_int(doc.at("sigma").get<int>());
    const int k = get_or<int>(doc, "k", 3);

    std::vector<double> beta;
    const bool has_regular = doc.contains("regular");
    if (has_regular == doc.contains("beta")) {
      throw ValidationError("give exactly one of \"beta\" or \"regular\"");
    }
    int n = 0;
    double phase = 0.0;
    if (has_regular) {
      const auto& r = doc.at("regular");
      reject_unknown_keys(r, {"n", "phase"}, "regular");
      n = r.at("n").get<int>();
      phase = get_or<double>(r, "phase", 0.0);
      if (n < 2) throw ValidationError("regular.n must be >= 2");
    } else {
      beta = doc.at("beta").get<std::vector<double>>();
      n = static_cast<int>(beta.size());
    }
    std::vector<double> masses = doc.contains("masses")
                                     ? doc.at("masses").get<std::vector<double>>()
                                     : std::vector<double>(static_cast<std::size_t>(n), 1.0);
    PolygonConfig polygon = has_regular ? regular_polygon(n, phase, masses, sigma, k)
                                        : PolygonConfig(masses, beta, sigma, k);

    RunConfig rc(std::move(polygon));
    const auto& init = doc.at("initial");
    reject_unknown_keys(init, {"rho", "rho_dot", "theta_dot"}, "initial");
    rc.rho0 = init.at("rho").get<double>();
    rc.rho_dot0 = get_or<double>(init, "rho_dot", 0.0);
    const json theta_dot = init.value("theta_dot", json(0.0));
    if (theta_dot.is_string()) {
      if (theta_dot.get<std::string>() != "relative_equilibrium") {
        throw ValidationError("initial.theta_dot must be a number or \"relative_equilibrium\"");
      }
      rc.theta_dot0 = relative_equilibrium_theta_dot(rc.polygon, rc.rho0);
    } else {
      rc.theta_dot0 = theta_dot.get<double>();
    }

    rc.synthesis.z_sign = get_or<int>(doc, "z_sign", 1);
    if (doc.contains("z_direction")) {
      rc.synthesis.z_direction = AmbientVector(doc.at("z_direction").get<std::vector<double>>());
    }

    if (doc.contains("integration")) {
      const auto& s = doc.at("integration");
      reject_unknown_keys(s, {"rel_tol", "abs_tol", "max_step", "min_step", "sample_interval"},
                          "integration");
      rc.settings.rel_tol = get_or<double>(s, "rel_tol", rc.settings.rel_tol);
      rc.settings.abs_tol = get_or<double>(s, "abs_tol", rc.settings.abs_tol);
      rc.settings.max_step = get_or<double>(s, "max_step", rc.settings.max_step);
      rc.settings.min_step = get_or<double>(s, "min_step", rc.settings.min_step);
      rc.settings.sample_interval =
          get_or<double>(s, "sample_interval", rc.settings.sample_interval);
    }
    rc.settings.validate();

    if (doc.contains("t_span")) {
      const auto span = doc.at("t_span").get<std::vector<double>>();
      if (span.size() != 2 || !(span[1] > span[0])) {
        throw ValidationError("t_span must be [t0, t1] with t1 > t0");
      }
      rc.t0 = span[0];
      rc.t1 = span[1];
    }

    if (doc.contains("criterion")) {
      const auto& c = doc.at("criterion");
      reject_unknown_keys(c, {"rho_grid", "tol_b", "tol_c"}, "criterion");
      rc.rho_grid = get_or<std::vector<double>>(c, "rho_grid", {});
      rc.tol_b = get_or<double>(c, "tol_b", rc.tol_b);
      rc.tol_c = get_or<double>(c, "tol_c", rc.tol_c);
    }
    if (rc.rho_grid.empty()) rc.rho_grid = default_rho_grid(sigma);
    if (!(rc.tol_b > 0) || !(rc.tol_c > 0)) throw ValidationError("tolerances must be positive");

    if (doc.contains("cross_validation")) {
      const auto& x = doc.at("cross_validation");
      reject_unknown_keys(x, {"max_deviation"}, "cross_validation");
      rc.max_deviation = get_or<double>(x, "max_deviation", rc.max_deviation);
    }
    if (doc.contains("output_dir")) rc.out_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("flags")) {
      const auto& f = doc.at("flags");
      reject_unknown_keys(f, {"force", "strict_b", "project"}, "flags");
      rc.force = get_or<bool>(f, "force", false);
      rc.strict_b = get_or<bool>(f, "strict_b", false);
      rc.project = get_or<bool>(f, "project", false);
    }

    rc.initial =
        synthesize_initial(rc.polygon, rc.rho0, rc.rho_dot0, rc.theta_dot0, rc.synthesis);
    return rc;
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_json(path));
}

ScanConfig parse_scan_config(const json& doc) {
  require_schema(doc);
  reject_unknown_keys(doc,
                      {"schema_version", "n_min", "n_max", "k", "mass_mode", "perturbations",
                       "sigmas", "rho_grid", "tol_b", "tol_c", "seed"},
                      "scan config");
  try {
    ScanConfig sc;
    sc.n_min = get_or<int>(doc, "n_min", sc.n_min);
    sc.n_max = get_or<int>(doc, "n_max", sc.n_max);
    sc.k = get_or<int>(doc, "k", sc.k);
    const auto mode = get_or<std::string>(doc, "mass_mode", "equal");
    if (mode == "equal") {
      sc.mass_mode = MassMode::equal;
    } else if (mode == "random") {
      sc.mass_mode = MassMode::random;
    } else {
      throw ValidationError("mass_mode must be \"equal\" or \"random\"");
    }
    sc.perturbations = get_or<std::vector<double>>(doc, "perturbations", {0.0});
    sc.sigmas = get_or<std::vector<int>>(doc, "sigmas", {1, -1});
    for (int s : sc.sigmas) CurvatureSign::from_int(s);
    sc.rho_grid = get_or<std::vector<double>>(doc, "rho_grid", {});
    sc.tol_b = get_or<double>(doc, "tol_b", sc.tol_b);
    sc.tol_c = get_or<double>(doc, "tol_c", sc.tol_c);
    sc.seed = get_or<std::uint64_t>(doc, "seed", sc.seed);
    if (sc.n_min < 2) throw ValidationError("n_min must be >= 2");
    if (sc.k < 2) throw ValidationError("k must be >= 2");
    return sc;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scan config: ") + e.what());
  }
}

ScanConfig load_scan_config(const std::filesystem::path& path) {
  return parse_scan_config(read_json(path));
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
}  // namespace

json to_json(const Termination& termination) {
  return {{"status", to_string(termination.kind)},
          {"time", finite_or_null(termination.time)},
          {"description", termination.description}};
}

json to_json(const CriterionReport& report, const PolygonConfig& config) {
  json points = json::array();
  for (const auto& p : report.points) {
    json jp = {{"rho", p.rho}, {"evaluated", p.evaluated}};
    if (p.evaluated) {
      jp["b_spread_abs"] = p.b_spread_abs;
      jp["b_spread_rel"] = p.b_spread_rel;
      jp["c_max"] = p.c_max;
    } else {
      jp["error"] = p.error;
    }
    points.push_back(std::move(jp));
  }
  json out = {
      {"schema_version", kSchemaVersion},
      {"kind", "criterion_report"},
      {"n", config.n()},
      {"sigma", config.sigma().value()},
      {"k", config.k()},
      {"masses", config.masses()},
      {"beta", config.beta()},
      {"tol_b", report.tol_b},
      {"tol_c", report.tol_c},
      {"verdict", report.admissible ? "admissible" : "inadmissible"},
      {"admissible", report.admissible},
      {"max_b_spread_rel", report.max_b_spread_rel()},
      {"max_b_spread_abs", report.max_b_spread_abs()},
      {"max_c", report.max_c()},
      {"points", std::move(points)},
      {"warnings", report.warnings},
      {"method",
       "b-equality and c-vanishing checked numerically on a finite rho grid; this is numerical "
       "evidence, not a proof"},
  };
  out["failing_rho"] = report.failing_rho ? json(*report.failing_rho) : json(nullptr);
  // 1-based body number
  out["failing_index"] = report.failing_index ? json(*report.failing_index + 1) : json(nullptr);
  return out;
}

std::vector<std::string> trajectory_header(RunKind kind, const PolygonConfig& config) {
  std::vector<std::string> h{"time"};
  const int k = config.k();
  if (kind == RunKind::reduced) {
    for (const char* name : {"rho", "rho_dot", "theta", "theta_dot"}) h.emplace_back(name);
    for (int c = 1; c <= k - 2; ++c) h.push_back("z_" + std::to_string(c));
    for (int c = 1; c <= k - 2; ++c) h.push_back("zdot_" + std::to_string(c));
  } else {
    const std::size_t n = config.n();
    for (const char* prefix : {"q_", "qdot_"}) {
      for (std::size_t i = 1; i <= n; ++i) {
        for (int c = 1; c <= k; ++c) {
          h.push_back(prefix + std::to_string(i) + "_" + std::to_string(c));
        }
      }
    }
  }
  return h;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, RunKind kind,
                          const PolygonConfig& config) {
  const auto header = trajectory_header(kind, config);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (std::size_t j = 0; j < trajectory.times.size(); ++j) {
    if (trajectory.samples[j].size() + 1 != header.size()) {
      throw DimensionError("trajectory sample width does not match the CSV header");
    }
    out << format_double(trajectory.times[j]);
    for (double x : trajectory.samples[j]) out << ',' << format_double(x);
    out << '\n';
  }
}

namespace {
json series_stats(const std::vector<double>& v) {
  if (v.empty()) return nullptr;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {{"initial", v.front()},
          {"final", v.back()},
          {"min", *lo},
          {"max", *hi},
          {"relative_drift", ConservationSeries::relative_drift(v)}};
}
double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}
}  // namespace

json summarize(const ConservationSeries& series, const Trajectory& trajectory, RunKind kind,
               const PolygonConfig& config) {
  json out = {
      {"schema_version", kSchemaVersion},
      {"kind", "simulation_summary"},
      {"run_kind", kind == RunKind::reduced ? "reduced" : "full"},
      {"n", config.n()},
      {"sigma", config.sigma().value()},
      {"k", config.k()},
      {"samples", trajectory.times.size()},
      {"t_start", trajectory.times.empty() ? 0.0 : trajectory.times.front()},
      {"t_end", trajectory.times.empty() ? 0.0 : trajectory.times.back()},
      {"termination", to_json(trajectory.termination)},
      {"constraint_drift_max", max_of(series.constraint_drift)},
      {"tangency_drift_max", max_of(series.tangency_drift)},
  };
  if (kind == RunKind::reduced) {
    out["rho"] = series_stats(series.rho);
    out["angular_momentum"] = series_stats(series.angular_momentum);
  } else {
    out["wedge_c12"] = series_stats(series.wedge_c12);
    // planar radius sqrt(q_1^2 + q_2^2) over all bodies and samples; equals rho on the ansatz
    std::vector<double> radii;
    const std::size_t k = static_cast<std::size_t>(config.k());
    for (const auto& y : trajectory.samples) {
      for (std::size_t i = 0; i < config.n(); ++i) radii.push_back(std::hypot(y[i * k], y[i * k + 1]));
    }
    out["planar_radius"] = series_stats(radii);
  }
  json drift = json::array();
  for (std::size_t j = 0; j < series.times.size(); ++j) {
    json row = {{"time", series.times[j]}, {"constraint", series.constraint_drift[j]},
                {"tangency", series.tangency_drift[j]}};
    if (kind == RunKind::reduced) {
      row["angular_momentum"] = series.angular_momentum[j];
    } else {
      row["wedge_c12"] = series.wedge_c12[j];
    }
    drift.push_back(std::move(row));
  }
  out["series"] = std::move(drift);
  return out;
}

}  // namespace curvebody::io
