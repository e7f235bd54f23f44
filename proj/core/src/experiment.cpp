#include "graphband/experiment.hpp"

#include "graphband/svg_plot.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace graphband {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kDatasetSalt = 7;

std::string fmt_double(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) ==
        allowed.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

std::string feedback_to_string(FeedbackMode m) {
  return m == FeedbackMode::partial ? "partial" : "full";
}

std::string policy_to_string(PolicyMode m) {
  return m == PolicyMode::closed_form_bidding ? "closed_form" : "dec_solver";
}

std::string mode_to_string(SyntheticMode m) {
  return m == SyntheticMode::diverse ? "diverse" : "poor";
}

json config_to_json(const ExperimentConfig& c) {
  json env;
  env["type"] = c.environment.type;
  if (c.environment.type == "synthetic") {
    env["mode"] = mode_to_string(c.environment.mode);
    env["noise_sd"] = c.environment.noise_sd;
    env["value_scale"] = c.environment.value_scale;
    env["feature_dim"] = c.environment.feature_dim;
  } else {
    env["path"] = c.environment.path;
    env["price_window"] = {c.environment.price_lo, c.environment.price_hi};
    env["max_rows"] = c.environment.max_rows;
  }
  json out;
  out["environment"] = env;
  json algs = json::array();
  for (Algorithm a : c.algorithms) algs.push_back(to_string(a));
  out["algorithms"] = algs;
  out["grid_steps"] = c.grid_steps;
  out["gamma_scales"] = c.gamma_scales;
  out["T"] = c.horizon;
  out["seeds"] = c.seeds;
  out["learning_rates"] = {{"loss", c.loss_lr}, {"graph", c.graph_lr}};
  out["feedback_mode"] = feedback_to_string(c.feedback_mode);
  out["policy_mode"] = policy_to_string(c.policy_mode);
  out["doubling"] = c.doubling;
  out["reg_bound"] = c.reg_bound;
  out["output_dir"] = c.output_dir;
  return out;
}

std::string cell_id(Algorithm alg, int steps, double scale,
                    std::uint64_t seed) {
  std::ostringstream id;
  id << to_string(alg) << "_n" << steps << "_c" << fmt_double(scale, "%g")
     << "_s" << seed;
  return id.str();
}

json meta_to_json(const DatasetMeta& m) {
  json out;
  out["source"] = m.source;
  out["seed"] = m.seed;
  out["rounds"] = m.rounds;
  out["feature_dim"] = m.feature_dim;
  out["w_range"] = {m.w_lo, m.w_hi};
  out["v_range"] = {m.v_lo, m.v_hi};
  out["shared_price_map"] = m.shared_price_map;
  out["skipped_rows"] = m.skipped_rows;
  out["filtered_rows"] = m.filtered_rows;
  return out;
}

Dataset make_cell_dataset(const ExperimentConfig& config, std::uint64_t seed) {
  const std::uint64_t data_seed = derive_seed(seed, kDatasetSalt);
  if (config.environment.type == "synthetic") {
    SyntheticParams params;
    params.mode = config.environment.mode;
    params.rounds = config.horizon;
    params.feature_dim = config.environment.feature_dim;
    params.noise_sd = config.environment.noise_sd;
    params.value_scale = config.environment.value_scale;
    return generate_synthetic(params, data_seed);
  }
  CsvLoadOptions opts;
  opts.price_lo = config.environment.price_lo;
  opts.price_hi = config.environment.price_hi;
  opts.max_rows = config.environment.max_rows > 0
                      ? std::min(config.environment.max_rows, config.horizon)
                      : config.horizon;
  opts.seed = data_seed;
  return load_auction_csv(config.environment.path, opts).dataset;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::squarecb_ug: return "squarecb_ug";
    case Algorithm::squarecb: return "squarecb";
    case Algorithm::greedy: return "greedy";
    case Algorithm::trivial: return "trivial";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "squarecb_ug") return Algorithm::squarecb_ug;
  if (s == "squarecb") return Algorithm::squarecb;
  if (s == "greedy") return Algorithm::greedy;
  if (s == "trivial") return Algorithm::trivial;
  throw ConfigError("unknown algorithm '" + s + "'");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require(doc.is_object(), "config must be a JSON object");
  check_keys(doc,
             {"environment", "algorithms", "grid_steps", "gamma_scales", "T",
              "seeds", "learning_rates", "feedback_mode", "policy_mode",
              "doubling", "reg_bound", "output_dir"},
             "config");

  ExperimentConfig c;
  try {
    require(doc.contains("environment"), "config needs an environment");
    const json& env = doc["environment"];
    require(env.is_object(), "environment must be an object");
    c.environment.type = env.value("type", "synthetic");
    if (c.environment.type == "synthetic") {
      check_keys(env, {"type", "mode", "noise_sd", "value_scale", "feature_dim"},
                 "environment");
      const std::string mode = env.value("mode", "diverse");
      if (mode == "diverse") {
        c.environment.mode = SyntheticMode::diverse;
      } else if (mode == "poor") {
        c.environment.mode = SyntheticMode::poor;
      } else {
        throw ConfigError("environment.mode must be 'diverse' or 'poor'");
      }
      c.environment.noise_sd = env.value("noise_sd", 0.05);
      c.environment.value_scale = env.value("value_scale", 40.0);
      c.environment.feature_dim = env.value("feature_dim", 32);
      require(c.environment.noise_sd >= 0.0, "noise_sd must be >= 0");
      require(c.environment.feature_dim > 0, "feature_dim must be positive");
    } else if (c.environment.type == "csv") {
      check_keys(env, {"type", "path", "price_window", "max_rows"},
                 "environment");
      require(env.contains("path"), "csv environment needs a path");
      c.environment.path = env["path"].get<std::string>();
      if (env.contains("price_window")) {
        const auto& w = env["price_window"];
        require(w.is_array() && w.size() == 2,
                "price_window must be [lo, hi]");
        c.environment.price_lo = w[0].get<double>();
        c.environment.price_hi = w[1].get<double>();
        require(c.environment.price_lo < c.environment.price_hi,
                "price_window must satisfy lo < hi");
      }
      c.environment.max_rows = env.value("max_rows", 5000);
      require(c.environment.max_rows >= 0, "max_rows must be >= 0");
    } else {
      throw ConfigError("environment.type must be 'synthetic' or 'csv'");
    }

    require(doc.contains("algorithms") && doc["algorithms"].is_array(),
            "config needs an algorithms list");
    for (const auto& a : doc["algorithms"]) {
      c.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
    }
    require(!c.algorithms.empty(), "nothing to run: algorithms list is empty");

    require(doc.contains("grid_steps") && doc["grid_steps"].is_array(),
            "config needs grid_steps (bid grid resolutions)");
    for (const auto& n : doc["grid_steps"]) {
      const int steps = n.get<int>();
      require(steps >= 1, "grid_steps entries must be >= 1");
      c.grid_steps.push_back(steps);
    }
    require(!c.grid_steps.empty(), "grid_steps list is empty");

    if (doc.contains("gamma_scales")) {
      for (const auto& g : doc["gamma_scales"]) {
        const double scale = g.get<double>();
        require(scale > 0.0, "gamma_scales entries must be positive");
        c.gamma_scales.push_back(scale);
      }
      require(!c.gamma_scales.empty(), "gamma_scales list is empty");
    } else {
      c.gamma_scales = {1.0};
    }

    c.horizon = doc.value("T", 5000);
    require(c.horizon >= 1, "T must be positive");

    require(doc.contains("seeds") && doc["seeds"].is_array(),
            "config needs a seeds list");
    for (const auto& s : doc["seeds"]) {
      c.seeds.push_back(s.get<std::uint64_t>());
    }
    require(!c.seeds.empty(), "seeds list is empty");

    if (doc.contains("learning_rates")) {
      const json& lr = doc["learning_rates"];
      check_keys(lr, {"loss", "graph"}, "learning_rates");
      c.loss_lr = lr.value("loss", 0.01);
      c.graph_lr = lr.value("graph", 0.05);
      require(c.loss_lr > 0.0 && c.graph_lr > 0.0,
              "learning rates must be positive");
    }

    const std::string fb = doc.value("feedback_mode", "partial");
    if (fb == "partial") {
      c.feedback_mode = FeedbackMode::partial;
    } else if (fb == "full") {
      c.feedback_mode = FeedbackMode::full;
    } else {
      throw ConfigError("feedback_mode must be 'partial' or 'full'");
    }

    const std::string pm = doc.value("policy_mode", "closed_form");
    if (pm == "closed_form" || pm == "closed_form_bidding") {
      c.policy_mode = PolicyMode::closed_form_bidding;
    } else if (pm == "dec_solver") {
      c.policy_mode = PolicyMode::dec_solver;
    } else {
      throw ConfigError("policy_mode must be 'closed_form' or 'dec_solver'");
    }

    c.doubling = doc.value("doubling", false);
    c.reg_bound = doc.value("reg_bound", 0.0);
    require(c.reg_bound >= 0.0, "reg_bound must be >= 0");
    c.output_dir = doc.value("output_dir", "out");
    require(!c.output_dir.empty(), "output_dir must not be empty");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::unique_ptr<BiddingEnvironment> make_cell_environment(
    const ExperimentConfig& config, int grid_steps, std::uint64_t seed) {
  Dataset ds = make_cell_dataset(config, seed);
  if (static_cast<int>(ds.rounds.size()) > config.horizon) {
    ds.rounds.resize(config.horizon);
    ds.meta.rounds = config.horizon;
  }
  return std::make_unique<BiddingEnvironment>(std::move(ds),
                                              BidGrid::uniform_steps(grid_steps));
}

void write_trace_csv(const std::string& path,
                     const std::vector<RoundTranscript>& transcripts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << "round,cum_regret,norm_regret,epoch,gamma\n";
  double cum = 0.0;
  for (const auto& tr : transcripts) {
    cum += tr.regret_increment;
    const int round = tr.round + 1;
    out << round << ',' << fmt_double(cum, "%.6f") << ','
        << fmt_double(cum / round, "%.6f") << ',' << tr.epoch << ',';
    if (std::isfinite(tr.gamma)) out << fmt_double(tr.gamma, "%.6f");
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing trace file: " + path);
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      (line != "round,cum_regret,norm_regret,epoch,gamma" &&
       line != "round,cum_regret,norm_regret,epoch,gamma\r")) {
    throw ConfigError("unexpected trace header in " + path);
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    TraceRow r;
    char gamma_buf[64] = {0};
    const int matched =
        std::sscanf(line.c_str(), "%d,%lf,%lf,%d,%63s", &r.round,
                    &r.cum_regret, &r.norm_regret, &r.epoch, gamma_buf);
    if (matched < 4) throw ConfigError("malformed trace row in " + path);
    r.gamma = matched == 5 ? std::atof(gamma_buf) : kNaN;
    rows.push_back(r);
  }
  return rows;
}

MatrixReport run_matrix(const ExperimentConfig& config, int jobs) {
  struct Cell {
    Algorithm alg;
    int steps;
    double scale;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (Algorithm alg : config.algorithms) {
    for (int steps : config.grid_steps) {
      for (double scale : config.gamma_scales) {
        for (std::uint64_t seed : config.seeds) {
          cells.push_back({alg, steps, scale, seed});
        }
      }
    }
  }

  MatrixReport report;
  report.output_dir = config.output_dir;
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir / "traces");
  report.cells.resize(cells.size());

  const int workers = std::max(
      1, std::min<int>(jobs, static_cast<int>(cells.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      CellOutcome& out = report.cells[i];
      out.id = cell_id(cell.alg, cell.steps, cell.scale, cell.seed);
      out.algorithm = cell.alg;
      out.grid_steps = cell.steps;
      out.gamma_scale = cell.scale;
      out.seed = cell.seed;
      const auto started = std::chrono::steady_clock::now();
      try {
        auto env = make_cell_environment(config, cell.steps, cell.seed);
        LearnerConfig lc;
        lc.algorithm = cell.alg;
        lc.gamma_scale = cell.scale;
        lc.feedback_mode = config.feedback_mode;
        lc.policy_mode = config.policy_mode;
        lc.doubling = config.doubling;
        lc.reg_bound = config.reg_bound;
        lc.loss_lr = config.loss_lr;
        lc.graph_lr = config.graph_lr;
        lc.seed = cell.seed;
        const RunResult result = run_learner(*env, lc);
        const std::string rel = "traces/" + out.id + ".csv";
        write_trace_csv((out_dir / rel).string(), result.transcripts);
        out.file = rel;
        out.status = "ok";
      } catch (const std::exception& e) {
        out.status = std::string("failed: ") + e.what();
      }
      out.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started)
                        .count();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  for (const auto& cell : report.cells) {
    if (cell.status != "ok") ++report.failed_cells;
  }

  json manifest;
  manifest["config"] = config_to_json(config);
  json datasets;
  for (std::uint64_t seed : config.seeds) {
    try {
      const Dataset ds = make_cell_dataset(config, seed);
      datasets[std::to_string(seed)] = meta_to_json(ds.meta);
    } catch (const std::exception& e) {
      datasets[std::to_string(seed)] = std::string("failed: ") + e.what();
    }
  }
  manifest["datasets"] = datasets;
  json cell_entries = json::array();
  for (const auto& cell : report.cells) {
    json entry;
    entry["id"] = cell.id;
    entry["algorithm"] = to_string(cell.algorithm);
    entry["grid_steps"] = cell.grid_steps;
    entry["epsilon"] = 1.0 / cell.grid_steps;
    entry["gamma_scale"] = cell.gamma_scale;
    entry["seed"] = cell.seed;
    entry["file"] = cell.file;
    entry["status"] = cell.status;
    entry["wall_ms"] = cell.wall_ms;
    cell_entries.push_back(entry);
  }
  manifest["cells"] = cell_entries;

  const fs::path manifest_path = out_dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write manifest: " + manifest_path.string());
  }
  out << manifest.dump(2) << '\n';
  report.manifest_path = manifest_path.string();
  return report;
}

std::vector<CellTrace> load_traces(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ConfigError("cannot open manifest: " + manifest_path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.contains("cells") || !doc["cells"].is_array()) {
    throw ConfigError("manifest has no cells array");
  }
  const fs::path base = fs::path(manifest_path).parent_path();
  std::vector<CellTrace> traces;
  for (const auto& entry : doc["cells"]) {
    if (entry.value("status", "") != "ok") continue;
    CellTrace t;
    t.key.algorithm = entry.at("algorithm").get<std::string>();
    t.key.grid_steps = entry.at("grid_steps").get<int>();
    t.key.gamma_scale = entry.at("gamma_scale").get<double>();
    t.seed = entry.at("seed").get<std::uint64_t>();
    t.rows = read_trace_csv((base / entry.at("file").get<std::string>()).string());
    traces.push_back(std::move(t));
  }
  if (traces.empty()) throw ConfigError("manifest has no completed cells");
  return traces;
}

std::vector<AggregateCurve> aggregate_traces(
    const std::vector<CellTrace>& traces) {
  std::map<CellKey, std::vector<const CellTrace*>> groups;
  for (const auto& t : traces) groups[t.key].push_back(&t);

  std::vector<AggregateCurve> curves;
  for (const auto& [key, members] : groups) {
    const std::size_t horizon = members.front()->rows.size();
    for (const auto* m : members) {
      if (m->rows.size() != horizon) {
        std::ostringstream msg;
        msg << "mismatched horizons in cell group " << key.algorithm << "_n"
            << key.grid_steps << ": " << horizon << " vs " << m->rows.size();
        throw ConfigError(msg.str());
      }
    }
    AggregateCurve curve;
    curve.key = key;
    curve.num_seeds = static_cast<int>(members.size());
    curve.mean.resize(horizon);
    curve.sd.resize(horizon);
    for (std::size_t r = 0; r < horizon; ++r) {
      double sum = 0.0;
      for (const auto* m : members) sum += m->rows[r].norm_regret;
      const double mean = sum / curve.num_seeds;
      curve.mean[r] = mean;
      if (curve.num_seeds > 1) {
        double ss = 0.0;
        for (const auto* m : members) {
          const double d = m->rows[r].norm_regret - mean;
          ss += d * d;
        }
        curve.sd[r] = std::sqrt(ss / (curve.num_seeds - 1));
      } else {
        curve.sd[r] = kNaN;
      }
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

void write_summary_csv(const std::vector<AggregateCurve>& curves,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write summary: " + path);
  out << "algorithm,grid_steps,epsilon,gamma_scale,num_seeds,"
         "final_mean_norm_regret,final_sd_norm_regret,single_seed\n";
  for (const auto& c : curves) {
    out << c.key.algorithm << ',' << c.key.grid_steps << ','
        << fmt_double(1.0 / c.key.grid_steps, "%.6g") << ','
        << fmt_double(c.key.gamma_scale, "%g") << ',' << c.num_seeds << ','
        << fmt_double(c.mean.back(), "%.6f") << ',';
    if (std::isfinite(c.sd.back())) out << fmt_double(c.sd.back(), "%.6f");
    out << ',' << (c.num_seeds == 1 ? 1 : 0) << '\n';
  }
}

std::string summary_table(const std::vector<AggregateCurve>& curves) {
  std::ostringstream out;
  out << std::left << std::setw(14) << "algorithm" << std::setw(7) << "grid"
      << std::setw(9) << "c" << std::setw(7) << "seeds"
      << "final normalized regret\n";
  for (const auto& c : curves) {
    out << std::left << std::setw(14) << c.key.algorithm << std::setw(7)
        << c.key.grid_steps << std::setw(9)
        << fmt_double(c.key.gamma_scale, "%g") << std::setw(7) << c.num_seeds
        << fmt_double(c.mean.back(), "%.4f");
    if (std::isfinite(c.sd.back())) {
      out << " +/- " << fmt_double(c.sd.back(), "%.4f");
    } else {
      out << " (single seed)";
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> write_plots(const std::vector<AggregateCurve>& curves,
                                     const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::string> written;

  std::map<int, std::vector<const AggregateCurve*>> by_grid;
  std::map<std::string, bool> multi_scale;  // algorithm -> several c values?
  std::map<std::string, std::vector<double>> scales_seen;
  for (const auto& c : curves) {
    by_grid[c.key.grid_steps].push_back(&c);
    auto& seen = scales_seen[c.key.algorithm];
    if (std::find(seen.begin(), seen.end(), c.key.gamma_scale) == seen.end()) {
      seen.push_back(c.key.gamma_scale);
    }
  }
  for (const auto& [alg, seen] : scales_seen) multi_scale[alg] = seen.size() > 1;

  auto series_label = [&](const CellKey& key) {
    std::string label = key.algorithm;
    if (multi_scale[key.algorithm]) {
      label += " (c=" + fmt_double(key.gamma_scale, "%g") + ")";
    }
    return label;
  };

  for (const auto& [steps, members] : by_grid) {
    std::vector<PlotSeries> series;
    for (const auto* c : members) {
      PlotSeries s;
      s.label = series_label(c->key);
      const std::size_t horizon = c->mean.size();
      // Thin long curves; always keep the final round.
      const std::size_t stride = horizon > 600 ? (horizon + 599) / 600 : 1;
      for (std::size_t r = 0; r < horizon; r += stride) {
        s.x.push_back(static_cast<double>(r + 1));
        s.y.push_back(c->mean[r]);
        s.band.push_back(c->sd[r]);
      }
      if ((horizon - 1) % stride != 0) {
        s.x.push_back(static_cast<double>(horizon));
        s.y.push_back(c->mean.back());
        s.band.push_back(c->sd.back());
      }
      series.push_back(std::move(s));
    }
    std::ostringstream title;
    title << "Normalized regret, bid grid 1/" << steps;
    const fs::path file = fs::path(out_dir) /
                          ("curves_n" + std::to_string(steps) + ".svg");
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plot: " + file.string());
    out << render_chart(title.str(), "round", "normalized regret", series);
    written.push_back(file.string());
  }

  if (by_grid.size() > 1) {
    // Final regret against grid resolution: one point per epsilon.
    std::map<std::pair<std::string, double>, PlotSeries> sweep;
    for (const auto& c : curves) {
      auto& s = sweep[{c.key.algorithm, c.key.gamma_scale}];
      s.label = series_label(c.key);
      s.markers = true;
      s.x.push_back(1.0 / c.key.grid_steps);
      s.y.push_back(c.mean.back());
      s.band.push_back(c.sd.back());
    }
    std::vector<PlotSeries> series;
    for (auto& [key, s] : sweep) {
      // Sort points by epsilon.
      std::vector<std::size_t> order(s.x.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return s.x[a] < s.x[b]; });
      PlotSeries sorted;
      sorted.label = s.label;
      sorted.markers = true;
      for (std::size_t i : order) {
        sorted.x.push_back(s.x[i]);
        sorted.y.push_back(s.y[i]);
        sorted.band.push_back(s.band[i]);
      }
      series.push_back(std::move(sorted));
    }
    const fs::path file = fs::path(out_dir) / "sweep_epsilon.svg";
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plot: " + file.string());
    out << render_chart("Final normalized regret vs bid grid epsilon",
                        "epsilon", "final normalized regret", series);
    written.push_back(file.string());
  }
  return written;
}

}  // namespace graphband
