#pragma once

#include "graphband/common.hpp"
#include "graphband/feedback_graph.hpp"
#include "graphband/losses.hpp"

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace graphband {

struct LossObservation {
  int action = -1;
  double loss = 0.0;
};

// Labeled edge indicator: playing `from` did (present = 1) or did not
// (present = 0) reveal the loss of `to`.
struct EdgeObservation {
  int from = -1;
  int to = -1;
  double present = 0.0;
};

// Everything one round of interaction feeds back to the regression oracles.
struct FeedbackBatch {
  Vec context;
  std::vector<LossObservation> losses;
  std::vector<EdgeObservation> edges;
  // Bidding environments: whether the auction value was revealed this round
  // (the learner won).  The value network must not update otherwise.
  bool value_observed = true;
  // Bidding environments: the competing-price bin the loss predictions were
  // built from this round; -1 when not applicable.
  int price_bin = -1;
};

// ---------------------------------------------------------------------------
// Loss oracles (online squared-loss regression)
// ---------------------------------------------------------------------------

// Two-layer perceptron with ReLU hidden units and a scalar linear output.
// Weights initialize uniformly in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
class MlpValueNet {
 public:
  MlpValueNet(int input_dim, int hidden_dim, std::uint64_t seed);

  double forward(const Vec& x) const;
  // One SGD step on a scalar upstream gradient dL/d(output).
  void step(const Vec& x, double dloss_doutput, double lr);

  // Flat parameter vector in the order [W1 row-major, b1, w2, b2]; the
  // gradient below uses the same layout.
  Vec parameters() const;
  void set_parameters(const Vec& theta);
  Vec gradient(const Vec& x, double dloss_doutput) const;
  // Hidden pre-activations, exposed so tests can steer clear of the ReLU
  // kinks when finite-differencing.
  Vec preactivations(const Vec& x) const;

  void reset(std::uint64_t seed);
  int input_dim() const { return static_cast<int>(w1_.cols()); }
  int hidden_dim() const { return static_cast<int>(w1_.rows()); }

 private:
  Mat w1_;
  Vec b1_;
  Vec w2_;
  double b2_ = 0.0;
};

// Loss predictions for a first-price auction given a value estimate and a
// predicted competing-price bin: bids below the bin lose (loss 1/2), bids at
// or above it win and pay their own price.  Clamped into [0, 1].
Vec bidding_loss_predictions(double value_estimate, int price_bin,
                             const BidGrid& grid);

// Online squared-loss oracle for the auction losses.  A value network
// predicts the item value and the per-bid losses follow from the predicted
// competing-price bin.  The value is only revealed on winning rounds, so
// update() is a silent no-op when the batch says the value was not observed.
class BiddingLossOracle {
 public:
  BiddingLossOracle(int input_dim, BidGrid grid, double lr, std::uint64_t seed,
                    int hidden_dim = 32);

  Vec predict(const Vec& x, int price_bin) const;
  double value_estimate(const Vec& x) const { return net_.forward(x); }
  void update(const FeedbackBatch& batch);
  void reset(std::uint64_t seed) { net_.reset(seed); }

  int num_actions() const { return grid_.num_actions(); }
  const BidGrid& grid() const { return grid_; }

  // Test hooks: mean squared error on a batch and its parameter gradient.
  Vec parameters() const { return net_.parameters(); }
  void set_parameters(const Vec& theta) { net_.set_parameters(theta); }
  double batch_loss(const Vec& x, const std::vector<LossObservation>& obs,
                    int price_bin) const;
  Vec batch_gradient(const Vec& x, const std::vector<LossObservation>& obs,
                     int price_bin) const;
  const MlpValueNet& net() const { return net_; }

 private:
  BidGrid grid_;
  MlpValueNet net_;
  double lr_;
};

// Per-action linear probe trained by online least squares on the raw margin
// (predictions are clamped into [0, 1] only when served).
class LinearLossOracle {
 public:
  LinearLossOracle(int input_dim, int num_actions, double lr);

  Vec predict(const Vec& x) const;
  void update(const FeedbackBatch& batch);
  void reset(std::uint64_t seed);

  int num_actions() const { return static_cast<int>(theta_.rows()); }

  Vec parameters() const;
  void set_parameters(const Vec& theta);
  double batch_loss(const Vec& x, const std::vector<LossObservation>& obs) const;
  Vec batch_gradient(const Vec& x,
                     const std::vector<LossObservation>& obs) const;

 private:
  Mat theta_;  // num_actions x (input_dim + 1), last column is the bias
  double lr_;
};

// ---------------------------------------------------------------------------
// Graph oracles (online log-loss regression)
// ---------------------------------------------------------------------------

// K-way softmax classifier over competing-price bins.  Sampling a bin induces
// a deterministic bidding feedback graph; training minimizes the log loss of
// the mixture edge probability sum_m p_m * G_m(i, j) on labeled edges,
// averaged with a 1/K factor.  Logits initialize to zero.
class SoftmaxPriceGraphOracle {
 public:
  SoftmaxPriceGraphOracle(int input_dim, int num_bins, double lr);

  Vec bin_distribution(const Vec& x) const;
  std::pair<int, GraphModel> sample(const Vec& x, Rng& rng) const;
  // Mixture probability of edge (i, j) under the bin distribution p.
  static double edge_probability(const Vec& bin_probs, int i, int j);
  void update(const FeedbackBatch& batch);
  void reset(std::uint64_t seed);

  int num_bins() const { return static_cast<int>(theta_.rows()); }

  Vec parameters() const;
  void set_parameters(const Vec& theta);
  double batch_loss(const Vec& x, const std::vector<EdgeObservation>& edges) const;
  Vec batch_gradient(const Vec& x,
                     const std::vector<EdgeObservation>& edges) const;

 private:
  Mat theta_;  // num_bins x (input_dim + 1), last column is the bias
  double lr_;
};

// Independent logistic model per ordered pair (i, j); suits generic feedback
// graph environments where edges have no shared structure.  Trained by one
// OGD step per round on the mean log loss of the labeled edges.
class LogisticEdgeGraphOracle {
 public:
  LogisticEdgeGraphOracle(int input_dim, int num_actions, double lr);

  GraphModel predict(const Vec& x) const;
  double edge_prob(const Vec& x, int i, int j) const;
  void update(const FeedbackBatch& batch);
  void reset(std::uint64_t seed);

  int num_actions() const { return num_actions_; }

  Vec parameters() const;
  void set_parameters(const Vec& theta);
  double batch_loss(const Vec& x, const std::vector<EdgeObservation>& edges) const;
  Vec batch_gradient(const Vec& x,
                     const std::vector<EdgeObservation>& edges) const;

 private:
  int num_actions_;
  Mat theta_;  // (num_actions^2) x (input_dim + 1); row i*K+j is edge (i, j)
  double lr_;
};

// ---------------------------------------------------------------------------
// Regret accounting
// ---------------------------------------------------------------------------

// Running totals of the decision regret and the two oracle excess losses,
// all measured against ground truth supplied by the environment.
class RegretLedger {
 public:
  void add_round(double regret_inc, double sq_excess_inc, double log_excess_inc);

  double cum_regret() const { return cum_regret_; }
  double cum_sq_excess() const { return cum_sq_excess_; }
  double cum_log_excess() const { return cum_log_excess_; }
  int rounds() const { return static_cast<int>(regret_.size()); }

  const std::vector<double>& regret_increments() const { return regret_; }
  const std::vector<double>& sq_excess_increments() const { return sq_excess_; }
  const std::vector<double>& log_excess_increments() const { return log_excess_; }

  // Sum over observed actions of (f_hat - c)^2 - (f_true - c)^2.
  static double squared_loss_excess(const Vec& f_hat, const Vec& f_true,
                                    const std::vector<LossObservation>& obs);

 private:
  std::vector<double> regret_, sq_excess_, log_excess_;
  double cum_regret_ = 0.0, cum_sq_excess_ = 0.0, cum_log_excess_ = 0.0;
};

// ---------------------------------------------------------------------------
// Oracle suites: what a learner consumes each round
// ---------------------------------------------------------------------------

struct RoundEstimates {
  Vec f;          // predicted losses, clamped into [0, 1]
  GraphModel g;   // predicted feedback graph
  int price_bin = -1;  // bidding only: sampled competing-price bin
};

// Bundles the loss and graph oracles behind the round protocol.  edge_prob()
// reports the graph predictor's probability for an edge as of the most
// recent predict() call (used for log-loss regret accounting).
class OracleSuite {
 public:
  virtual ~OracleSuite() = default;
  virtual RoundEstimates predict(const Vec& x, Rng& rng) = 0;
  virtual void update(const FeedbackBatch& batch) = 0;
  virtual double edge_prob(int i, int j) const = 0;
  virtual void reset(std::uint64_t seed) = 0;
  virtual int num_actions() const = 0;
};

// Value network + price classifier, the full pair for bidding environments.
class BiddingOracleSuite : public OracleSuite {
 public:
  BiddingOracleSuite(int input_dim, const BidGrid& grid, double loss_lr,
                     double graph_lr, std::uint64_t seed);

  RoundEstimates predict(const Vec& x, Rng& rng) override;
  void update(const FeedbackBatch& batch) override;
  double edge_prob(int i, int j) const override;
  void reset(std::uint64_t seed) override;
  int num_actions() const override { return loss_oracle_.num_actions(); }

  const BiddingLossOracle& loss_oracle() const { return loss_oracle_; }
  const SoftmaxPriceGraphOracle& graph_oracle() const { return graph_oracle_; }

 private:
  BiddingLossOracle loss_oracle_;
  SoftmaxPriceGraphOracle graph_oracle_;
  Vec last_bin_probs_;
};

// Value network only, for bandit baselines on bidding environments: the
// competing-price bin is drawn uniformly every round (a frozen zero-logit
// classifier) and the reported graph is the identity.
class BanditBiddingSuite : public OracleSuite {
 public:
  BanditBiddingSuite(int input_dim, const BidGrid& grid, double loss_lr,
                     std::uint64_t seed);

  RoundEstimates predict(const Vec& x, Rng& rng) override;
  void update(const FeedbackBatch& batch) override;
  double edge_prob(int i, int j) const override { return i == j ? 1.0 : 0.0; }
  void reset(std::uint64_t seed) override;
  int num_actions() const override { return loss_oracle_.num_actions(); }

 private:
  BiddingLossOracle loss_oracle_;
  GraphModel identity_;
};

// Linear loss probe + per-edge logistic graph model for generic graph
// feedback environments.
class GenericOracleSuite : public OracleSuite {
 public:
  GenericOracleSuite(int input_dim, int num_actions, double loss_lr,
                     double graph_lr, std::uint64_t seed);

  RoundEstimates predict(const Vec& x, Rng& rng) override;
  void update(const FeedbackBatch& batch) override;
  double edge_prob(int i, int j) const override;
  void reset(std::uint64_t seed) override;
  int num_actions() const override { return loss_oracle_.num_actions(); }

  const LinearLossOracle& loss_oracle() const { return loss_oracle_; }
  const LogisticEdgeGraphOracle& graph_oracle() const { return graph_oracle_; }

 private:
  LinearLossOracle loss_oracle_;
  LogisticEdgeGraphOracle graph_oracle_;
  Vec last_context_;
};

// Linear loss probe with an identity graph, for bandit baselines on generic
// environments.
class BanditGenericSuite : public OracleSuite {
 public:
  BanditGenericSuite(int input_dim, int num_actions, double loss_lr,
                     std::uint64_t seed);

  RoundEstimates predict(const Vec& x, Rng& rng) override;
  void update(const FeedbackBatch& batch) override;
  double edge_prob(int i, int j) const override { return i == j ? 1.0 : 0.0; }
  void reset(std::uint64_t seed) override;
  int num_actions() const override { return loss_oracle_.num_actions(); }

 private:
  LinearLossOracle loss_oracle_;
  GraphModel identity_;
};

}  // namespace graphband
