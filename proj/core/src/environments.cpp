#include "graphband/environments.hpp"

#include "graphband/losses.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace graphband {

namespace {

struct RawRound {
  Vec x;
  double w = 0.0;
  double v = 0.0;
};

std::vector<RawRound> synthetic_raw_rounds(const SyntheticParams& params,
                                           std::uint64_t seed) {
  if (params.rounds <= 0) throw std::invalid_argument("rounds must be positive");
  if (params.feature_dim <= 0) {
    throw std::invalid_argument("feature_dim must be positive");
  }
  const int d = params.feature_dim;
  const double scale = std::sqrt(static_cast<double>(d));
  Rng rng(seed);

  Vec theta_w(d), theta_v(d);
  for (int i = 0; i < d; ++i) theta_w[i] = rng.normal();
  for (int i = 0; i < d; ++i) theta_v[i] = rng.normal();

  std::vector<RawRound> rounds(params.rounds);
  for (auto& r : rounds) {
    r.x = Vec(d);
    if (params.mode == SyntheticMode::diverse) {
      for (int i = 0; i < d; ++i) r.x[i] = rng.normal();
    } else {
      // Poor-context regime: only the first quarter of the features carry
      // information, the rest are constant.
      const int live = d / 4;
      for (int i = 0; i < live; ++i) r.x[i] = rng.normal();
      for (int i = live; i < d; ++i) r.x[i] = 1.0;
    }
    const double noise = rng.normal(0.0, params.noise_sd);
    r.w = theta_w.dot(r.x) / scale + noise;
    r.v = r.w + std::max(params.value_scale * theta_v.dot(r.x) / scale, 0.0);
  }
  return rounds;
}

struct AffineMap {
  double lo = 0.0;
  double hi = 1.0;
  double apply(double raw) const { return (raw - lo) / (hi - lo); }
};

AffineMap fit_min_max(const std::vector<double>& values, const char* what) {
  double lo = values.front(), hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo < 1e-12) {
    throw std::runtime_error(std::string("degenerate ") + what +
                             " range: all values equal");
  }
  return {lo, hi};
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& raw, double* out) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + s.size()) return false;
  if (!std::isfinite(value)) return false;
  *out = value;
  return true;
}

}  // namespace

Dataset generate_synthetic(const SyntheticParams& params, std::uint64_t seed) {
  const auto raw = synthetic_raw_rounds(params, seed);

  // One shared min-max map over both prices.  The construction guarantees
  // v >= w, and a shared monotone map keeps that ordering — and with it the
  // meaning of winning — after normalization.  Per-variable maps would
  // compress the value range (values reach ~40x the competing-price spread)
  // until almost no auction is profitably winnable.
  std::vector<double> prices;
  prices.reserve(2 * raw.size());
  for (const auto& r : raw) {
    prices.push_back(r.w);
    prices.push_back(r.v);
  }
  const AffineMap price_map = fit_min_max(prices, "price");

  Dataset out;
  out.rounds.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.rounds[i].x = raw[i].x;
    out.rounds[i].w = price_map.apply(raw[i].w);
    out.rounds[i].v = price_map.apply(raw[i].v);
  }
  out.meta.source = params.mode == SyntheticMode::diverse ? "synthetic:diverse"
                                                          : "synthetic:poor";
  out.meta.seed = seed;
  out.meta.rounds = static_cast<int>(out.rounds.size());
  out.meta.feature_dim = params.feature_dim;
  out.meta.w_lo = out.meta.v_lo = price_map.lo;
  out.meta.w_hi = out.meta.v_hi = price_map.hi;
  out.meta.shared_price_map = true;
  return out;
}

std::vector<RawPricePair> generate_synthetic_raw(const SyntheticParams& params,
                                                 std::uint64_t seed) {
  const auto raw = synthetic_raw_rounds(params, seed);
  std::vector<RawPricePair> pairs(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) pairs[i] = {raw[i].w, raw[i].v};
  return pairs;
}

CsvLoadReport load_auction_csv(const std::string& path,
                               const CsvLoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("dataset file is empty: " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.size() < 3) {
    throw std::runtime_error("dataset header needs feature columns plus "
                             "winning_price and competing_price");
  }
  const std::size_t ncols = header.size();
  const int d = static_cast<int>(ncols) - 2;
  if (trim(header[ncols - 2]) != "winning_price" ||
      trim(header[ncols - 1]) != "competing_price") {
    throw std::runtime_error(
        "dataset header must end with winning_price,competing_price");
  }

  CsvLoadReport report;
  std::vector<RawRound> kept;
  int filtered = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != ncols) {
      std::ostringstream why;
      why << "expected " << ncols << " fields, got " << fields.size();
      report.skipped.push_back({line_no, why.str()});
      continue;
    }
    RawRound r;
    r.x = Vec(d);
    bool ok = true;
    for (int i = 0; i < d && ok; ++i) {
      if (!parse_double(fields[i], &r.x[i])) {
        report.skipped.push_back(
            {line_no, "column '" + trim(header[i]) + "' is not numeric"});
        ok = false;
      }
    }
    if (!ok) continue;
    if (!parse_double(fields[ncols - 2], &r.v)) {
      report.skipped.push_back({line_no, "column 'winning_price' is not numeric"});
      continue;
    }
    if (!parse_double(fields[ncols - 1], &r.w)) {
      report.skipped.push_back(
          {line_no, "column 'competing_price' is not numeric"});
      continue;
    }
    if (r.v < options.price_lo || r.v > options.price_hi) {
      ++filtered;
      continue;
    }
    kept.push_back(std::move(r));
  }

  if (kept.empty()) {
    throw std::runtime_error("no rows remain after the winning-price filter");
  }

  // Seeded subsample in randomized order.
  Rng rng(options.seed);
  for (std::size_t i = kept.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(i)));
    std::swap(kept[i - 1], kept[j]);
  }
  if (options.max_rows > 0 &&
      kept.size() > static_cast<std::size_t>(options.max_rows)) {
    kept.resize(options.max_rows);
  }

  // One shared map for both prices, so "bid >= competing price" survives
  // normalization.
  std::vector<double> prices;
  prices.reserve(2 * kept.size());
  for (const auto& r : kept) {
    prices.push_back(r.w);
    prices.push_back(r.v);
  }
  const AffineMap price_map = fit_min_max(prices, "price");

  Dataset& ds = report.dataset;
  ds.rounds.resize(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    ds.rounds[i].x = std::move(kept[i].x);
    ds.rounds[i].w = price_map.apply(kept[i].w);
    ds.rounds[i].v = price_map.apply(kept[i].v);
  }
  ds.meta.source = path;
  ds.meta.seed = options.seed;
  ds.meta.rounds = static_cast<int>(ds.rounds.size());
  ds.meta.feature_dim = d;
  ds.meta.w_lo = ds.meta.v_lo = price_map.lo;
  ds.meta.w_hi = ds.meta.v_hi = price_map.hi;
  ds.meta.shared_price_map = true;
  ds.meta.skipped_rows = static_cast<int>(report.skipped.size());
  ds.meta.filtered_rows = filtered;
  return report;
}

RealizedRound realize_round(const AuctionRound& r, const BidGrid& grid) {
  return {bidding_loss_vector(grid, r.w, r.v), build_bidding_graph(grid, r.w)};
}

// ---------------------------------------------------------------------------
// BiddingEnvironment
// ---------------------------------------------------------------------------

BiddingEnvironment::BiddingEnvironment(Dataset dataset, BidGrid grid)
    : dataset_(std::move(dataset)), grid_(std::move(grid)) {
  if (dataset_.rounds.empty()) {
    throw std::invalid_argument("bidding environment needs at least one round");
  }
  const auto dim = dataset_.rounds.front().x.size();
  loss_table_.reserve(dataset_.rounds.size());
  for (const auto& r : dataset_.rounds) {
    if (r.x.size() != dim) {
      throw std::invalid_argument("inconsistent feature dimension in dataset");
    }
    if (r.w < 0.0 || r.w > 1.0 || r.v < 0.0 || r.v > 1.0) {
      throw std::invalid_argument("dataset prices must lie in [0, 1]");
    }
    loss_table_.push_back(bidding_loss_vector(grid_, r.w, r.v));
  }
}

const Vec& BiddingEnvironment::context(int t) const {
  return dataset_.rounds.at(t).x;
}

const Vec& BiddingEnvironment::true_losses(int t) const {
  return loss_table_.at(t);
}

double BiddingEnvironment::true_edge_prob(int t, int i, int j) const {
  const double w = dataset_.rounds.at(t).w;
  const double ai = grid_.bid(i);
  const double aj = grid_.bid(j);
  const bool edge = (ai < w && aj < w) || (ai >= w && j >= i);
  return edge ? 1.0 : 0.0;
}

RoundFeedback BiddingEnvironment::step(int t, int action, FeedbackMode mode) {
  const auto& r = dataset_.rounds.at(t);
  const Vec& losses = loss_table_.at(t);
  const double bid = grid_.bid(action);
  const int k = grid_.num_actions();

  RoundFeedback fb;
  fb.value_observed = bid >= r.w;
  fb.losses.reserve(k);
  for (int j = 0; j < k; ++j) {
    const double aj = grid_.bid(j);
    const bool edge =
        (bid < r.w && aj < r.w) || (bid >= r.w && j >= action);
    if (edge) fb.losses.push_back({j, losses[j]});
  }
  if (mode == FeedbackMode::full) {
    fb.realized_graph = build_bidding_graph(grid_, r.w);
  }
  return fb;
}

std::unique_ptr<OracleSuite> BiddingEnvironment::make_oracles(
    Algorithm alg, double loss_lr, double graph_lr, std::uint64_t seed) const {
  const int d = static_cast<int>(dataset_.rounds.front().x.size());
  switch (alg) {
    case Algorithm::squarecb_ug:
    case Algorithm::greedy:
      return std::make_unique<BiddingOracleSuite>(d, grid_, loss_lr, graph_lr,
                                                  seed);
    case Algorithm::squarecb:
      return std::make_unique<BanditBiddingSuite>(d, grid_, loss_lr, seed);
    case Algorithm::trivial:
      return nullptr;
  }
  throw std::logic_error("unknown algorithm");
}

// ---------------------------------------------------------------------------
// GenericGraphEnvironment
// ---------------------------------------------------------------------------

GenericGraphEnvironment::GenericGraphEnvironment(
    std::function<Vec(const Vec&)> f_star,
    std::function<GraphModel(const Vec&)> g_star, int num_actions,
    int feature_dim, int horizon, std::uint64_t seed, LossNoise noise,
    double gaussian_sd)
    : num_actions_(num_actions), feature_dim_(feature_dim), horizon_(horizon) {
  if (num_actions <= 0 || feature_dim <= 0 || horizon <= 0) {
    throw std::invalid_argument("generic environment sizes must be positive");
  }
  Rng rng(seed);
  contexts_.reserve(horizon);
  mean_losses_.reserve(horizon);
  realized_losses_.reserve(horizon);
  graph_models_.reserve(horizon);
  graphs_.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    Vec x(feature_dim);
    for (int i = 0; i < feature_dim; ++i) x[i] = rng.normal();

    Vec f = f_star(x);
    if (f.size() != num_actions) {
      throw std::invalid_argument("f_star returned wrong number of actions");
    }
    for (int j = 0; j < num_actions; ++j) {
      if (f[j] < 0.0 || f[j] > 1.0) {
        throw std::invalid_argument("mean losses must lie in [0, 1]");
      }
    }
    GraphModel model = g_star(x);
    if (model.num_actions() != num_actions) {
      throw std::invalid_argument("g_star returned wrong number of actions");
    }
    // Support graph of the conditional means: each action must be observable
    // regardless of which edges materialize.
    FeedbackGraph::AdjMatrix support(num_actions, num_actions);
    for (int i = 0; i < num_actions; ++i) {
      for (int j = 0; j < num_actions; ++j) {
        support(i, j) = model.prob(i, j) > 0.0 ? 1 : 0;
      }
    }
    if (!is_strongly_observable(FeedbackGraph(support))) {
      throw std::invalid_argument(
          "mean feedback graph is not strongly observable");
    }

    Vec losses(num_actions);
    switch (noise) {
      case LossNoise::none:
        losses = f;
        break;
      case LossNoise::bernoulli:
        for (int j = 0; j < num_actions; ++j) {
          losses[j] = rng.bernoulli(f[j]) ? 1.0 : 0.0;
        }
        break;
      case LossNoise::gaussian:
        for (int j = 0; j < num_actions; ++j) {
          losses[j] = clamp01(f[j] + rng.normal(0.0, gaussian_sd));
        }
        break;
    }

    graphs_.push_back(sample_graph(model, rng));
    contexts_.push_back(std::move(x));
    mean_losses_.push_back(std::move(f));
    realized_losses_.push_back(std::move(losses));
    graph_models_.push_back(std::move(model));
  }
}

RoundFeedback GenericGraphEnvironment::step(int t, int action,
                                            FeedbackMode mode) {
  const FeedbackGraph& g = graphs_.at(t);
  const Vec& losses = realized_losses_.at(t);
  RoundFeedback fb;
  for (int j : observed_set(g, action)) fb.losses.push_back({j, losses[j]});
  if (mode == FeedbackMode::full) fb.realized_graph = g;
  return fb;
}

double GenericGraphEnvironment::true_edge_prob(int t, int i, int j) const {
  return graph_models_.at(t).prob(i, j);
}

std::unique_ptr<OracleSuite> GenericGraphEnvironment::make_oracles(
    Algorithm alg, double loss_lr, double graph_lr, std::uint64_t seed) const {
  switch (alg) {
    case Algorithm::squarecb_ug:
    case Algorithm::greedy:
      return std::make_unique<GenericOracleSuite>(feature_dim_, num_actions_,
                                                  loss_lr, graph_lr, seed);
    case Algorithm::squarecb:
      return std::make_unique<BanditGenericSuite>(feature_dim_, num_actions_,
                                                  loss_lr, seed);
    case Algorithm::trivial:
      return nullptr;
  }
  throw std::logic_error("unknown algorithm");
}

}  // namespace graphband
