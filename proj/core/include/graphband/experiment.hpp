#pragma once

#include "graphband/environments.hpp"
#include "graphband/learners.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphband {

// Invalid configuration or malformed input files; the CLI maps this to its
// validation exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnvironmentSpec {
  std::string type = "synthetic";  // "synthetic" | "csv"
  SyntheticMode mode = SyntheticMode::diverse;
  double noise_sd = 0.05;
  double value_scale = 40.0;
  int feature_dim = 32;
  std::string path;  // csv only
  double price_lo = 100.0;
  double price_hi = 300.0;
  int max_rows = 5000;
};

struct ExperimentConfig {
  EnvironmentSpec environment;
  std::vector<Algorithm> algorithms;
  std::vector<int> grid_steps;  // bid grid resolution n, epsilon = 1/n
  std::vector<double> gamma_scales;
  int horizon = 5000;
  std::vector<std::uint64_t> seeds;
  double loss_lr = 0.01;
  double graph_lr = 0.05;
  FeedbackMode feedback_mode = FeedbackMode::partial;
  PolicyMode policy_mode = PolicyMode::closed_form_bidding;
  bool doubling = false;
  double reg_bound = 0.0;  // <= 0 means sqrt(T)
  std::string output_dir = "out";
};

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

// Parse and validate a JSON config document (throws ConfigError).
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

struct CellOutcome {
  std::string id;
  Algorithm algorithm = Algorithm::squarecb_ug;
  int grid_steps = 0;
  double gamma_scale = 1.0;
  std::uint64_t seed = 0;
  std::string file;  // trace path relative to the output dir
  std::string status = "ok";
  double wall_ms = 0.0;
};

struct MatrixReport {
  std::string output_dir;
  std::string manifest_path;
  std::vector<CellOutcome> cells;
  int failed_cells = 0;
};

// Execute every (algorithm, grid, gamma_scale, seed) cell, writing one trace
// CSV per cell plus a manifest.  Cells run concurrently up to `jobs`; a
// failing cell is recorded in the manifest without stopping the rest.
MatrixReport run_matrix(const ExperimentConfig& config, int jobs = 1);

// Build the environment a cell runs against.  Synthetic datasets (and the
// CSV row subsample) derive their randomness from the run seed, so all
// algorithms sharing a seed face the same auction stream.
std::unique_ptr<BiddingEnvironment> make_cell_environment(
    const ExperimentConfig& config, int grid_steps, std::uint64_t seed);

struct TraceRow {
  int round = 0;  // 1-based
  double cum_regret = 0.0;
  double norm_regret = 0.0;
  int epoch = 1;
  double gamma = 0.0;  // NaN when the learner has no exploration parameter
};

void write_trace_csv(const std::string& path,
                     const std::vector<RoundTranscript>& transcripts);
std::vector<TraceRow> read_trace_csv(const std::string& path);

struct CellKey {
  std::string algorithm;
  int grid_steps = 0;
  double gamma_scale = 1.0;

  friend bool operator<(const CellKey& a, const CellKey& b) {
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    if (a.grid_steps != b.grid_steps) return a.grid_steps < b.grid_steps;
    return a.gamma_scale < b.gamma_scale;
  }
  friend bool operator==(const CellKey& a, const CellKey& b) {
    return a.algorithm == b.algorithm && a.grid_steps == b.grid_steps &&
           a.gamma_scale == b.gamma_scale;
  }
};

struct CellTrace {
  CellKey key;
  std::uint64_t seed = 0;
  std::vector<TraceRow> rows;
};

// Per-round mean and sample standard deviation of normalized regret across
// the seeds of one cell group.
struct AggregateCurve {
  CellKey key;
  int num_seeds = 0;
  std::vector<double> mean;
  std::vector<double> sd;  // NaN entries when num_seeds == 1
};

std::vector<CellTrace> load_traces(const std::string& manifest_path);
// Throws ConfigError when seeds within one cell disagree on the horizon.
std::vector<AggregateCurve> aggregate_traces(const std::vector<CellTrace>& traces);

void write_summary_csv(const std::vector<AggregateCurve>& curves,
                       const std::string& path);
std::string summary_table(const std::vector<AggregateCurve>& curves);

// Regret-curve SVG per grid resolution, plus an epsilon-sweep view of final
// regret when the run covered several grids.  Returns the files written.
std::vector<std::string> write_plots(const std::vector<AggregateCurve>& curves,
                                     const std::string& out_dir);

}  // namespace graphband
