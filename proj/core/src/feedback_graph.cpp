#include "graphband/feedback_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace graphband {

FeedbackGraph::FeedbackGraph(AdjMatrix adj) : adj_(std::move(adj)) {
  if (adj_.rows() != adj_.cols())
    throw std::invalid_argument("FeedbackGraph: adjacency matrix must be square");
  for (int i = 0; i < adj_.rows(); ++i)
    for (int j = 0; j < adj_.cols(); ++j)
      if (adj_(i, j) > 1)
        throw std::invalid_argument("FeedbackGraph: entries must be 0 or 1");
}

FeedbackGraph FeedbackGraph::identity(int k) {
  AdjMatrix adj = AdjMatrix::Identity(k, k);
  return FeedbackGraph(std::move(adj));
}

FeedbackGraph FeedbackGraph::complete(int k) {
  AdjMatrix adj = AdjMatrix::Constant(k, k, 1);
  return FeedbackGraph(std::move(adj));
}

GraphModel::GraphModel(Mat probs) : probs_(std::move(probs)) {
  if (probs_.rows() != probs_.cols())
    throw std::invalid_argument("GraphModel: matrix must be square");
  const int k = static_cast<int>(probs_.rows());
  if (k == 0) throw std::invalid_argument("GraphModel: empty matrix");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (!(probs_(i, j) >= 0.0 && probs_(i, j) <= 1.0))
        throw std::invalid_argument("GraphModel: entries must lie in [0, 1]");
  for (int j = 0; j < k; ++j) {
    if (probs_.col(j).maxCoeff() <= 0.0)
      throw std::invalid_argument(
          "GraphModel: action " + std::to_string(j) +
          " is never observed (zero column)");
  }
  is_identity_ = probs_.isIdentity(0.0);
}

GraphModel GraphModel::identity(int k) { return GraphModel(Mat::Identity(k, k)); }

GraphModel GraphModel::from_graph(const FeedbackGraph& g) {
  return GraphModel(g.adjacency().cast<double>());
}

BidGrid BidGrid::uniform(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("BidGrid: epsilon must lie in (0, 1]");
  const double n_real = 1.0 / epsilon;
  const long long n = std::llround(n_real);
  if (n < 1 || std::abs(n_real - static_cast<double>(n)) > 1e-9)
    throw std::invalid_argument("BidGrid: 1/epsilon must be an integer");
  return uniform_steps(static_cast<int>(n));
}

BidGrid BidGrid::uniform_steps(int n) {
  if (n < 1) throw std::invalid_argument("BidGrid: need at least one step");
  BidGrid grid;
  grid.bids_.resize(n + 1);
  for (int i = 0; i <= n; ++i)
    grid.bids_[i] = static_cast<double>(i) / static_cast<double>(n);
  grid.epsilon_ = 1.0 / static_cast<double>(n);
  return grid;
}

BidGrid BidGrid::from_bids(std::vector<double> bids) {
  if (bids.size() < 2)
    throw std::invalid_argument("BidGrid: need at least two bids");
  if (bids.front() != 0.0 || bids.back() != 1.0)
    throw std::invalid_argument("BidGrid: bids must span [0, 1] exactly");
  for (std::size_t i = 1; i < bids.size(); ++i)
    if (!(bids[i] > bids[i - 1]))
      throw std::invalid_argument("BidGrid: bids must be strictly increasing");
  BidGrid grid;
  grid.bids_ = std::move(bids);
  // Spacing of a non-uniform grid is reported as the largest gap.
  double max_gap = 0.0;
  for (std::size_t i = 1; i < grid.bids_.size(); ++i)
    max_gap = std::max(max_gap, grid.bids_[i] - grid.bids_[i - 1]);
  grid.epsilon_ = max_gap;
  return grid;
}

int BidGrid::smallest_bid_at_least(double w) const {
  if (w > bids_.back())
    throw std::invalid_argument("BidGrid: no bid reaches w > 1");
  auto it = std::lower_bound(bids_.begin(), bids_.end(), w);
  return static_cast<int>(it - bids_.begin());
}

FeedbackGraph build_bidding_graph(const BidGrid& grid, double w) {
  const int k = grid.num_actions();
  FeedbackGraph::AdjMatrix adj = FeedbackGraph::AdjMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    const bool i_wins = grid.bid(i) >= w;
    for (int j = 0; j < k; ++j) {
      const bool j_wins = grid.bid(j) >= w;
      if (!i_wins && !j_wins) adj(i, j) = 1;          // losers see all losers
      else if (i_wins && j >= i) adj(i, j) = 1;       // winners see higher bids
    }
  }
  return FeedbackGraph(std::move(adj));
}

FeedbackGraph bidding_graph_from_bin(int num_actions, int bin) {
  if (bin < 0 || bin >= num_actions)
    throw std::invalid_argument("bidding_graph_from_bin: bin out of range");
  FeedbackGraph::AdjMatrix adj =
      FeedbackGraph::AdjMatrix::Zero(num_actions, num_actions);
  for (int i = 0; i < num_actions; ++i)
    for (int j = 0; j < num_actions; ++j)
      if ((i >= bin && j >= i) || (i < bin && j < bin)) adj(i, j) = 1;
  return FeedbackGraph(std::move(adj));
}

std::vector<int> observed_set(const FeedbackGraph& g, int i) {
  if (i < 0 || i >= g.num_actions())
    throw std::out_of_range("observed_set: action index out of range");
  std::vector<int> out;
  for (int j = 0; j < g.num_actions(); ++j)
    if (g.edge(i, j)) out.push_back(j);
  return out;
}

bool is_strongly_observable(const FeedbackGraph& g) {
  const int k = g.num_actions();
  for (int j = 0; j < k; ++j) {
    if (g.edge(j, j)) continue;
    bool seen_by_all_others = true;
    for (int i = 0; i < k && seen_by_all_others; ++i)
      if (i != j && !g.edge(i, j)) seen_by_all_others = false;
    if (!seen_by_all_others) return false;
  }
  return true;
}

namespace {

// Max independent set by branch and bound over a candidate bitmask.
int mis_recurse(const std::vector<std::uint32_t>& conflict, std::uint32_t cand,
                int acc, int& best) {
  if (acc + std::popcount(cand) <= best) return best;  // prune
  if (cand == 0) {
    best = std::max(best, acc);
    return best;
  }
  const int v = std::countr_zero(cand);
  // Branch 1: include v, dropping v and everything conflicting with it.
  mis_recurse(conflict, cand & ~(conflict[v] | (1u << v)), acc + 1, best);
  // Branch 2: exclude v.
  mis_recurse(conflict, cand & ~(1u << v), acc, best);
  return best;
}

}  // namespace

int independence_number(const FeedbackGraph& g) {
  const int k = g.num_actions();
  if (k > 25)
    throw std::invalid_argument(
        "independence_number: brute force is limited to K <= 25");
  if (k == 0) return 0;
  std::vector<std::uint32_t> conflict(k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && (g.edge(i, j) || g.edge(j, i))) conflict[i] |= 1u << j;
  int best = 0;
  mis_recurse(conflict, (k == 32 ? ~0u : (1u << k) - 1u), 0, best);
  return best;
}

bool independence_at_most_two(const FeedbackGraph& g) {
  const int k = g.num_actions();
  const auto independent = [&](int a, int b) {
    return !g.edge(a, b) && !g.edge(b, a);
  };
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      if (!independent(a, b)) continue;
      for (int c = b + 1; c < k; ++c)
        if (independent(a, c) && independent(b, c)) return false;
    }
  return true;
}

FeedbackGraph sample_graph(const GraphModel& model, Rng& rng) {
  const int k = model.num_actions();
  FeedbackGraph::AdjMatrix adj(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      adj(i, j) = rng.bernoulli(model.prob(i, j)) ? 1 : 0;
  return FeedbackGraph(std::move(adj));
}

}  // namespace graphband
