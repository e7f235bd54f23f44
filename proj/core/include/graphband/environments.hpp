#pragma once

#include "graphband/common.hpp"
#include "graphband/feedback_graph.hpp"
#include "graphband/oracles.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace graphband {

enum class Algorithm { squarecb_ug, squarecb, greedy, trivial };
enum class FeedbackMode { partial, full };
enum class PolicyMode { closed_form_bidding, dec_solver };

// One recorded auction: context features, competing price, item value.
struct AuctionRound {
  Vec x;
  double w = 0.0;
  double v = 0.0;
};

enum class SyntheticMode { diverse, poor };

struct SyntheticParams {
  SyntheticMode mode = SyntheticMode::diverse;
  int rounds = 5000;
  int feature_dim = 32;
  double noise_sd = 0.05;
  double value_scale = 40.0;
};

// How a dataset was produced, for the run manifest.
struct DatasetMeta {
  std::string source;
  std::uint64_t seed = 0;
  int rounds = 0;
  int feature_dim = 0;
  // Affine maps applied to raw prices: normalized = (raw - lo) / (hi - lo).
  double w_lo = 0.0, w_hi = 1.0;
  double v_lo = 0.0, v_hi = 1.0;
  bool shared_price_map = false;
  int skipped_rows = 0;
  int filtered_rows = 0;
};

struct Dataset {
  std::vector<AuctionRound> rounds;
  DatasetMeta meta;
};

// Raw (unnormalized) price pair from the synthetic generator, exposed so the
// construction guarantee v >= w can be tested directly.
struct RawPricePair {
  double w = 0.0;
  double v = 0.0;
};

// Synthetic auction stream: contexts are standard normal (all coordinates in
// diverse mode; only the first 8 in poor mode, the rest pinned to 1), the
// competing price is a noisy linear function of the context, and the value
// adds a rectified linear bump.  Both prices are min-max normalized to
// [0, 1] with one shared map fit over the generated dataset, preserving
// v >= w.
Dataset generate_synthetic(const SyntheticParams& params, std::uint64_t seed);
// Same stream before normalization, for tests.
std::vector<RawPricePair> generate_synthetic_raw(const SyntheticParams& params,
                                                 std::uint64_t seed);

struct CsvLoadOptions {
  double price_lo = 100.0;
  double price_hi = 300.0;
  int max_rows = 5000;
  std::uint64_t seed = 0;
};

struct CsvSkippedRow {
  int line = 0;  // 1-based line number in the file
  std::string reason;
};

struct CsvLoadReport {
  Dataset dataset;
  std::vector<CsvSkippedRow> skipped;
};

// Replay loader for recorded auctions.  Expects a header row and columns
// f0..f77, winning_price, competing_price.  Rows whose winning price falls
// outside the window are dropped; malformed rows are skipped and reported
// with line numbers.  The kept rows are shuffled under the seed, capped at
// max_rows, and both prices are normalized jointly (one shared affine map)
// so the win condition against the bid grid keeps its meaning.  The winning
// price acts as the item value.
CsvLoadReport load_auction_csv(const std::string& path,
                               const CsvLoadOptions& options);

struct RealizedRound {
  Vec losses;
  FeedbackGraph graph;
};

// Materialize one auction against a bid grid: the loss of every bid and the
// feedback graph induced by the competing price.
RealizedRound realize_round(const AuctionRound& r, const BidGrid& grid);

// ---------------------------------------------------------------------------
// Round protocol
// ---------------------------------------------------------------------------

// What the environment hands back after one action.
struct RoundFeedback {
  std::vector<LossObservation> losses;  // (j, loss_j) for observed actions
  bool value_observed = true;           // bidding: the learner won
  std::optional<FeedbackGraph> realized_graph;  // set in full-feedback mode
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual int num_actions() const = 0;
  virtual int horizon() const = 0;
  virtual const Vec& context(int t) const = 0;
  virtual RoundFeedback step(int t, int action, FeedbackMode mode) = 0;
  // Ground truth for regret and oracle-excess accounting.
  virtual const Vec& true_losses(int t) const = 0;
  virtual double true_edge_prob(int t, int i, int j) const = 0;
  // Regression oracles appropriate for this environment; null for learners
  // that consult none.
  virtual std::unique_ptr<OracleSuite> make_oracles(Algorithm alg,
                                                    double loss_lr,
                                                    double graph_lr,
                                                    std::uint64_t seed) const = 0;
};

// First-price-auction environment over a recorded or generated dataset.
class BiddingEnvironment : public Environment {
 public:
  BiddingEnvironment(Dataset dataset, BidGrid grid);

  int num_actions() const override { return grid_.num_actions(); }
  int horizon() const override { return static_cast<int>(dataset_.rounds.size()); }
  const Vec& context(int t) const override;
  RoundFeedback step(int t, int action, FeedbackMode mode) override;
  const Vec& true_losses(int t) const override;
  double true_edge_prob(int t, int i, int j) const override;
  std::unique_ptr<OracleSuite> make_oracles(Algorithm alg, double loss_lr,
                                            double graph_lr,
                                            std::uint64_t seed) const override;

  const BidGrid& grid() const { return grid_; }
  const DatasetMeta& meta() const { return dataset_.meta; }
  const AuctionRound& round(int t) const { return dataset_.rounds.at(t); }

 private:
  Dataset dataset_;
  BidGrid grid_;
  std::vector<Vec> loss_table_;  // realized losses per round
};

// Realizable stochastic test environment: losses have conditional mean
// f_star(x) and the feedback graph is drawn entrywise from g_star(x).
class GenericGraphEnvironment : public Environment {
 public:
  enum class LossNoise { none, bernoulli, gaussian };

  GenericGraphEnvironment(std::function<Vec(const Vec&)> f_star,
                          std::function<GraphModel(const Vec&)> g_star,
                          int num_actions, int feature_dim, int horizon,
                          std::uint64_t seed,
                          LossNoise noise = LossNoise::bernoulli,
                          double gaussian_sd = 0.1);

  int num_actions() const override { return num_actions_; }
  int horizon() const override { return horizon_; }
  const Vec& context(int t) const override { return contexts_.at(t); }
  RoundFeedback step(int t, int action, FeedbackMode mode) override;
  const Vec& true_losses(int t) const override { return mean_losses_.at(t); }
  double true_edge_prob(int t, int i, int j) const override;
  std::unique_ptr<OracleSuite> make_oracles(Algorithm alg, double loss_lr,
                                            double graph_lr,
                                            std::uint64_t seed) const override;

  const Vec& realized_losses(int t) const { return realized_losses_.at(t); }
  const FeedbackGraph& realized_graph(int t) const { return graphs_.at(t); }

 private:
  int num_actions_;
  int feature_dim_;
  int horizon_;
  std::vector<Vec> contexts_;
  std::vector<Vec> mean_losses_;
  std::vector<Vec> realized_losses_;
  std::vector<GraphModel> graph_models_;
  std::vector<FeedbackGraph> graphs_;
};

}  // namespace graphband
