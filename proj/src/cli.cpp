#include "curvebody/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "curvebody/diagnostics.hpp"
#include "curvebody/dynamics.hpp"
#include "curvebody/errors.hpp"
#include "curvebody/io.hpp"
#include "curvebody/parallel.hpp"
#include "curvebody/systems.hpp"

namespace curvebody::cli {

using nlohmann::json;

namespace {

std::filesystem::path output_dir(const CommandOptions& options,
                                 const std::optional<std::filesystem::path>& from_config) {
  std::filesystem::path dir = !options.out_dir.empty() ? options.out_dir
                              : from_config           ? *from_config
                                                      : std::filesystem::path(".");
  std::filesystem::create_directories(dir);
  return dir;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

io::RunConfig load_with_flags(const std::filesystem::path& path, const CommandOptions& options) {
  io::RunConfig rc = io::load_run_config(path);
  rc.force = rc.force || options.force;
  rc.strict_b = rc.strict_b || options.strict_b;
  rc.project = rc.project || options.project;
  return rc;
}

int exit_for(const Termination& t) {
  return t.kind == TerminationKind::completed ? kSuccess : kSingularity;
}

// Runs body and maps library errors onto exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CriterionError& e) {
    err << "criterion violated: " << e.what() << '\n';
    return kInadmissible;
  } catch (const SingularityError& e) {
    err << "singularity: " << e.what() << '\n';
    return kSingularity;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int simulate(const std::filesystem::path& config, const CommandOptions& options, RunKind kind,
             std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const io::RunConfig rc = load_with_flags(config, options);
    const auto& poly = rc.polygon;
    const CriterionReport criterion = criterion_report(poly, rc.rho_grid, rc.tol_b, rc.tol_c);
    if (kind == RunKind::reduced && !criterion.admissible && !rc.force) {
      err << "error: criterion rejects this configuration; pass --force to integrate the "
             "reduced system anyway\n";
      return static_cast<int>(kUsage);
    }

    Trajectory traj;
    const std::pair<double, double> span{rc.t0, rc.t1};
    if (kind == RunKind::reduced) {
      ReducedOptions ro;
      ro.strict_b = rc.strict_b;
      traj = integrate_adaptive(make_reduced_rhs(poly, ro), pack_reduced(rc.initial), span,
                                rc.settings);
    } else {
      const std::size_t k = static_cast<std::size_t>(poly.k());
      StepProjection projection;
      if (rc.project) projection = make_manifold_projection(poly.n(), poly.sigma(), k);
      traj = integrate_adaptive(make_full_rhs(poly.masses(), poly.sigma(), k),
                                pack_full(embed(rc.initial, poly)), span, rc.settings,
                                projection);
    }

    const auto dir = output_dir(options, rc.out_dir);
    {
      std::ofstream csv(dir / "trajectory.csv");
      if (!csv) throw ValidationError("cannot write trajectory.csv");
      io::write_trajectory_csv(csv, traj, kind, poly);
    }
    json summary = io::summarize(conservation_series(traj, kind, poly), traj, kind, poly);
    summary["off_criterion"] = !criterion.admissible;
    summary["criterion_verdict"] = criterion.admissible ? "admissible" : "inadmissible";
    summary["initial"] = {{"rho", rc.initial.rho},
                          {"rho_dot", rc.initial.rho_dot},
                          {"theta_dot", rc.initial.theta_dot}};
    summary["projection"] = kind == RunKind::full && rc.project;
    summary["strict_b"] = kind == RunKind::reduced && rc.strict_b;
    write_json(dir / "summary.json", summary);

    out << "termination: " << to_string(traj.termination.kind) << " at t = "
        << traj.termination.time << '\n';
    if (!traj.completed()) err << "run ended early: " << traj.termination.description << '\n';
    return exit_for(traj.termination);
  });
}

}  // namespace

int cmd_check(const std::filesystem::path& config, const CommandOptions& options,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const io::RunConfig rc = load_with_flags(config, options);
    const CriterionReport report =
        criterion_report(rc.polygon, rc.rho_grid, rc.tol_b, rc.tol_c);
    const json doc = io::to_json(report, rc.polygon);
    write_json(output_dir(options, rc.out_dir) / "report.json", doc);
    out << doc.dump(2) << '\n';
    return static_cast<int>(report.admissible ? kSuccess : kInadmissible);
  });
}

int cmd_simulate_reduced(const std::filesystem::path& config, const CommandOptions& options,
                         std::ostream& out, std::ostream& err) {
  return simulate(config, options, RunKind::reduced, out, err);
}

int cmd_simulate_full(const std::filesystem::path& config, const CommandOptions& options,
                      std::ostream& out, std::ostream& err) {
  return simulate(config, options, RunKind::full, out, err);
}

int cmd_cross_validate(const std::filesystem::path& config, const CommandOptions& options,
                       std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const io::RunConfig rc = load_with_flags(config, options);
    CrossValidationOptions xo;
    xo.force = rc.force;
    xo.rho_grid = rc.rho_grid;
    xo.tol_b = rc.tol_b;
    xo.tol_c = rc.tol_c;
    const CrossValidationReport r =
        cross_validate(rc.polygon, rc.initial, {rc.t0, rc.t1}, rc.settings, xo);
    const double deviation = std::max(r.max_position_deviation, r.max_velocity_deviation);
    const bool ran = r.reduced_termination.kind == TerminationKind::completed &&
                     r.full_termination.kind == TerminationKind::completed;
    const bool passed = ran && deviation <= rc.max_deviation;
    const json doc = {
        {"schema_version", io::kSchemaVersion},
        {"kind", "cross_validation_report"},
        {"n", rc.polygon.n()},
        {"sigma", rc.polygon.sigma().value()},
        {"k", rc.polygon.k()},
        {"t_span", {rc.t0, rc.t1}},
        {"rel_tol", rc.settings.rel_tol},
        {"max_position_deviation", r.max_position_deviation},
        {"max_velocity_deviation", r.max_velocity_deviation},
        {"residual_max", r.residual_max},
        {"compared_samples", r.compared_samples},
        {"max_deviation_bound", rc.max_deviation},
        {"passed", passed},
        {"off_criterion", r.off_criterion},
        {"reduced_termination", io::to_json(r.reduced_termination)},
        {"full_termination", io::to_json(r.full_termination)},
    };
    write_json(output_dir(options, rc.out_dir) / "report.json", doc);
    out << doc.dump(2) << '\n';
    if (!ran) return static_cast<int>(kSingularity);
    return static_cast<int>(passed ? kSuccess : kInadmissible);
  });
}

namespace {

struct ScanRow {
  int n = 0;
  int sigma = 1;
  double perturbation = 0.0;
  std::vector<double> masses;
  std::optional<PolygonConfig> config;
  std::string error;
};

std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
  }
  return s;
}

}  // namespace

int cmd_scan(const std::filesystem::path& config, const CommandOptions& options,
             std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const io::ScanConfig sc = io::load_scan_config(config);
    std::vector<ScanRow> rows;
    for (int sigma : sc.sigmas) {
      for (int n = sc.n_min; n <= sc.n_max; ++n) {
        for (double delta : sc.perturbations) {
          ScanRow row;
          row.n = n;
          row.sigma = sigma;
          row.perturbation = delta;
          // seeded per row so the masses do not depend on thread scheduling
          std::seed_seq seq{static_cast<std::uint32_t>(sc.seed),
                            static_cast<std::uint32_t>(sc.seed >> 32),
                            static_cast<std::uint32_t>(rows.size())};
          std::mt19937_64 rng(seq);
          std::uniform_real_distribution<double> mass(0.5, 2.0);
          row.masses.assign(static_cast<std::size_t>(n), 1.0);
          if (sc.mass_mode == io::MassMode::random) {
            for (double& m : row.masses) m = mass(rng);
          }
          try {
            PolygonConfig regular = regular_polygon(n, 0.0, row.masses,
                                                    CurvatureSign::from_int(sigma), sc.k);
            std::vector<double> beta = regular.beta();
            beta.back() += delta;
            row.config.emplace(row.masses, beta, regular.sigma(), sc.k);
          } catch (const Error& e) {
            row.error = e.what();
          }
          rows.push_back(std::move(row));
        }
      }
    }
    if (rows.empty()) {
      err << "error: scan produced no configurations\n";
      return static_cast<int>(kUsage);
    }

    std::vector<PolygonConfig> configs;
    std::vector<std::size_t> owner;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].config) {
        configs.push_back(*rows[r].config);
        owner.push_back(r);
      }
    }
    const auto reports = parallel::criterion_reports(configs, sc.rho_grid, sc.tol_b, sc.tol_c);
    std::vector<const CriterionReport*> by_row(rows.size(), nullptr);
    for (std::size_t i = 0; i < owner.size(); ++i) by_row[owner[i]] = &reports[i];

    const auto dir = output_dir(options, std::nullopt);
    std::ofstream csv(dir / "scan.csv");
    if (!csv) throw ValidationError("cannot write scan.csv");
    csv << "row,n,sigma,k,mass_mode,perturbation,masses,b_spread_rel_max,b_spread_abs_max,"
           "c_max,verdict,failing_rho,failing_index,error\n";
    std::size_t admissible = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& row = rows[r];
      std::string masses;
      for (std::size_t i = 0; i < row.masses.size(); ++i) {
        masses += (i ? ";" : "") + io::format_double(row.masses[i]);
      }
      csv << r << ',' << row.n << ',' << row.sigma << ',' << sc.k << ','
          << (sc.mass_mode == io::MassMode::equal ? "equal" : "random") << ','
          << io::format_double(row.perturbation) << ',' << masses << ',';
      if (const auto* rep = by_row[r]) {
        std::string warn;
        for (const auto& w : rep->warnings) warn += (warn.empty() ? "" : " | ") + w;
        csv << io::format_double(rep->max_b_spread_rel()) << ','
            << io::format_double(rep->max_b_spread_abs()) << ','
            << io::format_double(rep->max_c()) << ','
            << (rep->admissible ? "admissible" : "inadmissible") << ','
            << (rep->failing_rho ? io::format_double(*rep->failing_rho) : "") << ','
            << (rep->failing_index ? std::to_string(*rep->failing_index + 1) : "") << ','
            << sanitize(warn) << '\n';
        admissible += rep->admissible ? 1 : 0;
      } else {
        csv << ",,,error,,," << sanitize(row.error) << '\n';
      }
    }
    out << rows.size() << " rows, " << admissible << " admissible\n";
    return static_cast<int>(kSuccess);
  });
}

int run_command(const std::string& name, const std::filesystem::path& config,
                const CommandOptions& options, std::ostream& out, std::ostream& err) {
  if (name == "check") return cmd_check(config, options, out, err);
  if (name == "simulate-reduced") return cmd_simulate_reduced(config, options, out, err);
  if (name == "simulate-full") return cmd_simulate_full(config, options, out, err);
  if (name == "cross-validate") return cmd_cross_validate(config, options, out, err);
  if (name == "scan") return cmd_scan(config, options, out, err);
  err << "unknown command '" << name << "'\n";
  return kUsage;
}

}  // namespace curvebody::cli
