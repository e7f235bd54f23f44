// graphband: seeded experiment runner and report generator for the
// graph-feedback contextual bandit library.
//
// Subcommands:
//   run        execute an experiment matrix from a JSON config
//   verify     run the built-in numeric property suites
//   plot       render SVG regret plots from a run manifest
//   aggregate  summarize traces (mean +/- sd across seeds)
//
// Exit codes: 0 success, 2 invalid config/arguments, 3 cell or check failures.

#include <CLI11.hpp>

#include "graphband/dec.hpp"
#include "graphband/dec_checks.hpp"
#include "graphband/experiment.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace graphband;

namespace {

std::string resolve_manifest(const std::string& in) {
  fs::path p(in);
  if (fs::is_directory(p)) p /= "manifest.json";
  return p.string();
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            int jobs) {
  ExperimentConfig config = load_config_file(config_path);
  if (!out_override.empty()) {
    config.output_dir = out_override;
  } else if (const char* env_out = std::getenv("GRAPHBAND_OUT")) {
    if (*env_out) config.output_dir = env_out;
  }
  if (jobs <= 0) {
    jobs = std::max(1u, std::thread::hardware_concurrency());
  }

  const MatrixReport report = run_matrix(config, jobs);
  for (const auto& cell : report.cells) {
    std::cout << cell.id << ": " << cell.status << " ("
              << static_cast<long>(cell.wall_ms) << " ms)\n";
  }
  std::cout << report.cells.size() - report.failed_cells << "/"
            << report.cells.size() << " cells completed; manifest at "
            << report.manifest_path << "\n";
  return report.failed_cells == 0 ? 0 : 3;
}

bool report_check(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  return ok;
}

int cmd_verify() {
  bool all_ok = true;

  {
    const auto r = sweep_amgm(100000, /*seed=*/1);
    std::ostringstream d;
    d << r.checked << " pairs, worst margin " << r.worst_margin;
    all_ok &= report_check("scaled AM-GM inequality", r.violations == 0, d.str());
  }
  {
    const double eps[] = {1.0 / 25, 1.0 / 50};
    const double gammas[] = {4.0, 16.0, 64.0};
    const auto r = verify_closed_form_bound(eps, gammas, 200, /*seed=*/2);
    std::ostringstream d;
    d << r.checked << " policies, max dec/(4/gamma) = " << r.max_ratio;
    all_ok &= report_check("closed-form policy DEC bound", r.violations == 0,
                           d.str());
  }
  {
    const int grids[] = {5, 10, 25, 50, 75};
    const auto r = verify_bidding_graph_structure(grids, 200, /*seed=*/3);
    std::ostringstream d;
    d << r.graphs_checked << " graphs, " << r.strong_failures
      << " observability failures, " << r.alpha_failures
      << " independence failures";
    all_ok &= report_check("bidding graphs strongly observable, alpha <= 2",
                           r.strong_failures == 0 && r.alpha_failures == 0,
                           d.str());
  }
  {
    // Solver optimality against a fine grid over the floored 1-simplex.
    Rng rng(4);
    double worst_excess = 0.0;
    int total = 0;
    for (double gamma : {4.0, 16.0, 64.0}) {
      for (int rep = 0; rep < 10; ++rep) {
        DecProblem prob;
        prob.f = Vec(2);
        prob.f[0] = rng.uniform01();
        prob.f[1] = rng.uniform01();
        Mat probs(2, 2);
        probs << 1.0, (rep % 2 ? 1.0 : 0.0), (rep % 3 ? 1.0 : 0.0), 1.0;
        prob.g = GraphModel(probs);
        prob.gamma = gamma;
        const auto res = minimize_dec(prob);
        const double floor = 1.0 / (gamma * 2), free_mass = 1.0 - 1.0 / gamma;
        double best = std::numeric_limits<double>::infinity();
        for (int t = 0; t <= 1000; ++t) {
          Vec p(2);
          p[0] = floor + free_mass * (t / 1000.0);
          p[1] = floor + free_mass * (1.0 - t / 1000.0);
          best = std::min(best, dec_value(prob, p));
        }
        worst_excess = std::max(worst_excess, res.value - best);
        ++total;
      }
    }
    std::ostringstream d;
    d << total << " instances, worst excess over grid = " << worst_excess;
    all_ok &= report_check("DEC solver vs grid minimum", worst_excess <= 1e-2,
                           d.str());
  }

  return all_ok ? 0 : 3;
}

int cmd_plot(const std::string& in, const std::string& out) {
  const std::string manifest = resolve_manifest(in);
  const auto curves = aggregate_traces(load_traces(manifest));
  const std::string out_dir =
      out.empty() ? fs::path(manifest).parent_path().string() : out;
  for (const auto& file : write_plots(curves, out_dir)) {
    std::cout << "wrote " << file << "\n";
  }
  return 0;
}

int cmd_aggregate(const std::string& in, const std::string& out) {
  const std::string manifest = resolve_manifest(in);
  const auto curves = aggregate_traces(load_traces(manifest));
  const std::string out_path =
      out.empty()
          ? (fs::path(manifest).parent_path() / "summary.csv").string()
          : out;
  write_summary_csv(curves, out_path);
  std::cout << summary_table(curves);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-feedback contextual bandit experiments"};
  app.require_subcommand(1);

  std::string config_path, out_override, in_path;
  int jobs = 0;

  auto* run = app.add_subcommand("run", "run an experiment matrix");
  run->add_option("--config", config_path, "JSON experiment config")
      ->required();
  run->add_option("--out", out_override,
                  "output directory (overrides config and GRAPHBAND_OUT)");
  run->add_option("--jobs", jobs, "max concurrent cells (default: all cores)");

  auto* verify = app.add_subcommand("verify", "run numeric property suites");

  auto* plot = app.add_subcommand("plot", "render SVG plots from a manifest");
  plot->add_option("--in", in_path, "manifest.json or run directory")
      ->required();
  plot->add_option("--out", out_override, "directory for SVG files");

  auto* aggregate =
      app.add_subcommand("aggregate", "summarize traces across seeds");
  aggregate->add_option("--in", in_path, "manifest.json or run directory")
      ->required();
  aggregate->add_option("--out", out_override, "summary CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_override, jobs);
    if (verify->parsed()) return cmd_verify();
    if (plot->parsed()) return cmd_plot(in_path, out_override);
    if (aggregate->parsed()) return cmd_aggregate(in_path, out_override);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
