#pragma once

#include "graphband/common.hpp"

#include <cstdint>
#include <vector>

namespace graphband {

// Directed feedback graph over K actions.  adj(i, j) == 1 means that playing
// action i reveals the loss of action j.  Self-loops are allowed and carry
// the usual meaning (the played action's own loss is revealed).
class FeedbackGraph {
 public:
  using AdjMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

  FeedbackGraph() = default;
  explicit FeedbackGraph(AdjMatrix adj);

  static FeedbackGraph identity(int k);
  static FeedbackGraph complete(int k);

  int num_actions() const { return static_cast<int>(adj_.rows()); }
  bool edge(int i, int j) const { return adj_(i, j) != 0; }
  const AdjMatrix& adjacency() const { return adj_; }

  bool operator==(const FeedbackGraph& other) const { return adj_ == other.adj_; }

 private:
  AdjMatrix adj_;
};

// Probabilistic feedback graph: entry (i, j) is the probability that playing
// i reveals the loss of j.  Construction validates that all entries lie in
// [0, 1] and that every action is observed with positive probability by at
// least one action (a strong-observability-in-expectation requirement; the
// DEC machinery needs positive observation weights).
class GraphModel {
 public:
  GraphModel() = default;
  explicit GraphModel(Mat probs);

  static GraphModel identity(int k);
  static GraphModel from_graph(const FeedbackGraph& g);

  int num_actions() const { return static_cast<int>(probs_.rows()); }
  double prob(int i, int j) const { return probs_(i, j); }
  const Mat& probs() const { return probs_; }
  // True when the model is exactly the identity matrix; lets the DEC solver
  // take an O(K) path per iteration instead of a matrix-vector product.
  bool is_identity() const { return is_identity_; }

 private:
  Mat probs_;
  bool is_identity_ = false;
};

// Discretized bid grid a_1 = 0 < a_2 < ... < a_K = 1.  Indices are 0-based.
class BidGrid {
 public:
  // Uniform grid {0, eps, 2*eps, ..., 1}; requires 1/eps integral within
  // 1e-9.  Bids are computed as i/n with n = round(1/eps), so the endpoints
  // are exactly 0 and 1.
  static BidGrid uniform(double epsilon);
  // Uniform grid with n steps, i.e. K = n + 1 actions and eps = 1/n.
  static BidGrid uniform_steps(int n);
  // Arbitrary strictly increasing grid spanning [0, 1] exactly.
  static BidGrid from_bids(std::vector<double> bids);

  int num_actions() const { return static_cast<int>(bids_.size()); }
  double bid(int i) const { return bids_.at(i); }
  double epsilon() const { return epsilon_; }
  const std::vector<double>& bids() const { return bids_; }

  // Index of the smallest bid >= w (the cheapest winning bid).  Requires
  // w <= 1 so that such a bid exists.
  int smallest_bid_at_least(double w) const;

 private:
  std::vector<double> bids_;
  double epsilon_ = std::numeric_limits<double>::quiet_NaN();
};

// Feedback graph realized in a first-price auction with highest competing
// bid w: losing bids (a_i < w) all observe exactly the losing bids' losses,
// while a winning bid a_i >= w observes every bid j >= i.
FeedbackGraph build_bidding_graph(const BidGrid& grid, double w);

// Same graph expressed through the index of a threshold bin: actions below
// `bin` form the losing clique and actions at or above it form the winning
// chain.  Equals build_bidding_graph(grid, grid.bid(bin)).
FeedbackGraph bidding_graph_from_bin(int num_actions, int bin);

// Out-neighborhood of action i: every j whose loss playing i reveals.
std::vector<int> observed_set(const FeedbackGraph& g, int i);

// A graph is strongly observable if every action either observes itself or
// is observed by all other actions.
bool is_strongly_observable(const FeedbackGraph& g);

// Exact independence number, ignoring self-loops; two distinct actions
// conflict if an edge exists between them in either direction.  Branch and
// bound; intended for K <= 25 and throws beyond that.
int independence_number(const FeedbackGraph& g);

// True when no three actions are pairwise independent, i.e. the independence
// number is at most 2.  O(K^3), usable well past the brute-force limit.
bool independence_at_most_two(const FeedbackGraph& g);

// Draw a realized graph: each edge is an independent Bernoulli with the
// model's probability.  Entries are visited in row-major order so the draw
// sequence is reproducible.
FeedbackGraph sample_graph(const GraphModel& model, Rng& rng);

}  // namespace graphband
