#include "graphband/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace graphband {

namespace {

// Append the constant bias feature.
Vec with_bias(const Vec& x) {
  Vec xb(x.size() + 1);
  xb.head(x.size()) = x;
  xb[x.size()] = 1.0;
  return xb;
}

void check_action(int a, int k, const char* who) {
  if (a < 0 || a >= k)
    throw std::out_of_range(std::string(who) + ": action index out of range");
}

}  // namespace

// ---------------------------------------------------------------------------
// MlpValueNet
// ---------------------------------------------------------------------------

MlpValueNet::MlpValueNet(int input_dim, int hidden_dim, std::uint64_t seed) {
  if (input_dim < 1 || hidden_dim < 1)
    throw std::invalid_argument("MlpValueNet: dimensions must be positive");
  w1_.resize(hidden_dim, input_dim);
  b1_.resize(hidden_dim);
  w2_.resize(hidden_dim);
  reset(seed);
}

void MlpValueNet::reset(std::uint64_t seed) {
  Rng rng(seed);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(w1_.cols()));
  for (int i = 0; i < w1_.rows(); ++i)
    for (int j = 0; j < w1_.cols(); ++j) w1_(i, j) = rng.uniform(-bound1, bound1);
  for (int i = 0; i < b1_.size(); ++i) b1_[i] = rng.uniform(-bound1, bound1);
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(w2_.size()));
  for (int i = 0; i < w2_.size(); ++i) w2_[i] = rng.uniform(-bound2, bound2);
  b2_ = rng.uniform(-bound2, bound2);
}

Vec MlpValueNet::preactivations(const Vec& x) const {
  if (x.size() != w1_.cols())
    throw std::invalid_argument("MlpValueNet: context dimension mismatch");
  return w1_ * x + b1_;
}

double MlpValueNet::forward(const Vec& x) const {
  const Vec h = preactivations(x).cwiseMax(0.0);
  return w2_.dot(h) + b2_;
}

Vec MlpValueNet::gradient(const Vec& x, double dloss_doutput) const {
  const Vec z = preactivations(x);
  const Vec h = z.cwiseMax(0.0);
  const Vec dh = dloss_doutput * w2_;
  Vec dz(z.size());
  for (int i = 0; i < z.size(); ++i) dz[i] = z[i] > 0.0 ? dh[i] : 0.0;

  Vec grad(w1_.size() + b1_.size() + w2_.size() + 1);
  int at = 0;
  for (int i = 0; i < w1_.rows(); ++i)
    for (int j = 0; j < w1_.cols(); ++j) grad[at++] = dz[i] * x[j];
  for (int i = 0; i < b1_.size(); ++i) grad[at++] = dz[i];
  for (int i = 0; i < w2_.size(); ++i) grad[at++] = dloss_doutput * h[i];
  grad[at] = dloss_doutput;
  return grad;
}

void MlpValueNet::step(const Vec& x, double dloss_doutput, double lr) {
  const Vec z = preactivations(x);
  const Vec h = z.cwiseMax(0.0);
  const Vec dh = dloss_doutput * w2_;
  for (int i = 0; i < z.size(); ++i) {
    const double dz = z[i] > 0.0 ? dh[i] : 0.0;
    if (dz != 0.0) {
      w1_.row(i) -= (lr * dz) * x.transpose();
      b1_[i] -= lr * dz;
    }
  }
  w2_ -= (lr * dloss_doutput) * h;
  b2_ -= lr * dloss_doutput;
}

Vec MlpValueNet::parameters() const {
  Vec theta(w1_.size() + b1_.size() + w2_.size() + 1);
  int at = 0;
  for (int i = 0; i < w1_.rows(); ++i)
    for (int j = 0; j < w1_.cols(); ++j) theta[at++] = w1_(i, j);
  for (int i = 0; i < b1_.size(); ++i) theta[at++] = b1_[i];
  for (int i = 0; i < w2_.size(); ++i) theta[at++] = w2_[i];
  theta[at] = b2_;
  return theta;
}

void MlpValueNet::set_parameters(const Vec& theta) {
  if (theta.size() != w1_.size() + b1_.size() + w2_.size() + 1)
    throw std::invalid_argument("MlpValueNet: parameter size mismatch");
  int at = 0;
  for (int i = 0; i < w1_.rows(); ++i)
    for (int j = 0; j < w1_.cols(); ++j) w1_(i, j) = theta[at++];
  for (int i = 0; i < b1_.size(); ++i) b1_[i] = theta[at++];
  for (int i = 0; i < w2_.size(); ++i) w2_[i] = theta[at++];
  b2_ = theta[at];
}

// ---------------------------------------------------------------------------
// BiddingLossOracle
// ---------------------------------------------------------------------------

Vec bidding_loss_predictions(double value_estimate, int price_bin,
                             const BidGrid& grid) {
  if (price_bin < 0 || price_bin >= grid.num_actions())
    throw std::out_of_range("bidding_loss_predictions: price bin out of range");
  const double w_hat = grid.bid(price_bin);
  Vec f(grid.num_actions());
  for (int i = 0; i < grid.num_actions(); ++i)
    f[i] = clamp01(bidding_loss(grid.bid(i), w_hat, value_estimate));
  return f;
}

BiddingLossOracle::BiddingLossOracle(int input_dim, BidGrid grid, double lr,
                                     std::uint64_t seed, int hidden_dim)
    : grid_(std::move(grid)), net_(input_dim, hidden_dim, seed), lr_(lr) {
  if (lr <= 0.0) throw std::invalid_argument("BiddingLossOracle: lr must be positive");
}

Vec BiddingLossOracle::predict(const Vec& x, int price_bin) const {
  return bidding_loss_predictions(net_.forward(x), price_bin, grid_);
}

namespace {

// dL/d(value) of the mean squared error between the bidding loss predictions
// and the observed losses.  The prediction for bid a is
// clamp01((1 - 1[a >= w_hat] (v - a)) / 2), so only winning, unclamped bids
// contribute, each with slope -1/2.
double bidding_batch_dv(const BidGrid& grid, double v_hat, int price_bin,
                        const std::vector<LossObservation>& obs) {
  const double w_hat = grid.bid(price_bin);
  double dv = 0.0;
  for (const auto& o : obs) {
    check_action(o.action, grid.num_actions(), "BiddingLossOracle");
    const double a = grid.bid(o.action);
    const double raw = bidding_loss(a, w_hat, v_hat);
    const double f = clamp01(raw);
    const double df_dv = (a >= w_hat && raw > 0.0 && raw < 1.0) ? -0.5 : 0.0;
    dv += 2.0 * (f - o.loss) * df_dv;
  }
  return dv / static_cast<double>(obs.size());
}

}  // namespace

double BiddingLossOracle::batch_loss(const Vec& x,
                                     const std::vector<LossObservation>& obs,
                                     int price_bin) const {
  if (obs.empty()) return 0.0;
  const Vec f = predict(x, price_bin);
  double total = 0.0;
  for (const auto& o : obs) {
    check_action(o.action, num_actions(), "BiddingLossOracle");
    const double r = f[o.action] - o.loss;
    total += r * r;
  }
  return total / static_cast<double>(obs.size());
}

Vec BiddingLossOracle::batch_gradient(const Vec& x,
                                      const std::vector<LossObservation>& obs,
                                      int price_bin) const {
  if (obs.empty()) return Vec::Zero(net_.parameters().size());
  if (price_bin < 0 || price_bin >= num_actions())
    throw std::out_of_range("BiddingLossOracle: price bin out of range");
  const double dv = bidding_batch_dv(grid_, net_.forward(x), price_bin, obs);
  return net_.gradient(x, dv);
}

void BiddingLossOracle::update(const FeedbackBatch& batch) {
  if (!batch.value_observed) return;  // value never revealed on losing rounds
  if (batch.losses.empty()) return;
  if (batch.price_bin < 0 || batch.price_bin >= num_actions())
    throw std::invalid_argument("BiddingLossOracle: batch lacks a price bin");
  const double dv = bidding_batch_dv(grid_, net_.forward(batch.context),
                                     batch.price_bin, batch.losses);
  net_.step(batch.context, dv, lr_);
}

// ---------------------------------------------------------------------------
// LinearLossOracle
// ---------------------------------------------------------------------------

LinearLossOracle::LinearLossOracle(int input_dim, int num_actions, double lr)
    : theta_(Mat::Zero(num_actions, input_dim + 1)), lr_(lr) {
  if (input_dim < 1 || num_actions < 1)
    throw std::invalid_argument("LinearLossOracle: dimensions must be positive");
  if (lr <= 0.0) throw std::invalid_argument("LinearLossOracle: lr must be positive");
}

Vec LinearLossOracle::predict(const Vec& x) const {
  const Vec xb = with_bias(x);
  if (xb.size() != theta_.cols())
    throw std::invalid_argument("LinearLossOracle: context dimension mismatch");
  Vec f = theta_ * xb;
  for (int i = 0; i < f.size(); ++i) f[i] = clamp01(f[i]);
  return f;
}

double LinearLossOracle::batch_loss(const Vec& x,
                                    const std::vector<LossObservation>& obs) const {
  if (obs.empty()) return 0.0;
  const Vec xb = with_bias(x);
  double total = 0.0;
  for (const auto& o : obs) {
    check_action(o.action, num_actions(), "LinearLossOracle");
    const double r = theta_.row(o.action).dot(xb) - o.loss;
    total += r * r;
  }
  return total / static_cast<double>(obs.size());
}

Vec LinearLossOracle::batch_gradient(const Vec& x,
                                     const std::vector<LossObservation>& obs) const {
  Mat grad = Mat::Zero(theta_.rows(), theta_.cols());
  if (!obs.empty()) {
    const Vec xb = with_bias(x);
    const double scale = 2.0 / static_cast<double>(obs.size());
    for (const auto& o : obs) {
      check_action(o.action, num_actions(), "LinearLossOracle");
      const double r = theta_.row(o.action).dot(xb) - o.loss;
      grad.row(o.action) += scale * r * xb.transpose();
    }
  }
  return Eigen::Map<const Vec>(grad.data(), grad.size());
}

void LinearLossOracle::update(const FeedbackBatch& batch) {
  if (batch.losses.empty()) return;
  const Vec xb = with_bias(batch.context);
  const double scale = 2.0 * lr_ / static_cast<double>(batch.losses.size());
  for (const auto& o : batch.losses) {
    check_action(o.action, num_actions(), "LinearLossOracle");
    const double r = theta_.row(o.action).dot(xb) - o.loss;
    theta_.row(o.action) -= scale * r * xb.transpose();
  }
}

void LinearLossOracle::reset(std::uint64_t) { theta_.setZero(); }

Vec LinearLossOracle::parameters() const {
  return Eigen::Map<const Vec>(theta_.data(), theta_.size());
}

void LinearLossOracle::set_parameters(const Vec& theta) {
  if (theta.size() != theta_.size())
    throw std::invalid_argument("LinearLossOracle: parameter size mismatch");
  theta_ = Eigen::Map<const Mat>(theta.data(), theta_.rows(), theta_.cols());
}

// ---------------------------------------------------------------------------
// SoftmaxPriceGraphOracle
// ---------------------------------------------------------------------------

SoftmaxPriceGraphOracle::SoftmaxPriceGraphOracle(int input_dim, int num_bins,
                                                 double lr)
    : theta_(Mat::Zero(num_bins, input_dim + 1)), lr_(lr) {
  if (input_dim < 1 || num_bins < 1)
    throw std::invalid_argument("SoftmaxPriceGraphOracle: dimensions must be positive");
  if (lr <= 0.0)
    throw std::invalid_argument("SoftmaxPriceGraphOracle: lr must be positive");
}

Vec SoftmaxPriceGraphOracle::bin_distribution(const Vec& x) const {
  const Vec xb = with_bias(x);
  if (xb.size() != theta_.cols())
    throw std::invalid_argument("SoftmaxPriceGraphOracle: context dimension mismatch");
  Vec logits = theta_ * xb;
  logits.array() -= logits.maxCoeff();
  Vec p = logits.array().exp();
  p /= p.sum();
  return p;
}

std::pair<int, GraphModel> SoftmaxPriceGraphOracle::sample(const Vec& x,
                                                           Rng& rng) const {
  const Vec p = bin_distribution(x);
  const int bin = rng.categorical(p);
  return {bin, GraphModel::from_graph(bidding_graph_from_bin(num_bins(), bin))};
}

double SoftmaxPriceGraphOracle::edge_probability(const Vec& bin_probs, int i,
                                                 int j) {
  const int k = static_cast<int>(bin_probs.size());
  if (i < 0 || i >= k || j < 0 || j >= k)
    throw std::out_of_range("edge_probability: index out of range");
  // A threshold bin m induces edge (i, j) iff (m <= i and j >= i) or
  // (m > max(i, j)); summing the bin masses over those m gives the mixture.
  double u = 0.0;
  if (j >= i) {
    for (int m = 0; m <= i; ++m) u += bin_probs[m];
    for (int m = j + 1; m < k; ++m) u += bin_probs[m];
  } else {
    for (int m = i + 1; m < k; ++m) u += bin_probs[m];
  }
  return std::min(u, 1.0);
}

double SoftmaxPriceGraphOracle::batch_loss(
    const Vec& x, const std::vector<EdgeObservation>& edges) const {
  const Vec p = bin_distribution(x);
  double total = 0.0;
  for (const auto& e : edges)
    total += log_loss(edge_probability(p, e.from, e.to), e.present);
  return total / static_cast<double>(num_bins());
}

Vec SoftmaxPriceGraphOracle::batch_gradient(
    const Vec& x, const std::vector<EdgeObservation>& edges) const {
  const int k = num_bins();
  const Vec xb = with_bias(x);
  const Vec p = bin_distribution(x);
  Vec glogits = Vec::Zero(k);
  for (const auto& e : edges) {
    const double u = edge_probability(p, e.from, e.to);
    const double coef = log_loss_du(u, e.present) / static_cast<double>(k);
    if (coef == 0.0) continue;
    for (int r = 0; r < k; ++r) {
      const bool member = (e.to >= e.from) ? (r <= e.from || r > e.to)
                                           : (r > e.from);
      glogits[r] += coef * p[r] * ((member ? 1.0 : 0.0) - u);
    }
  }
  Mat grad = glogits * xb.transpose();
  return Eigen::Map<const Vec>(grad.data(), grad.size());
}

void SoftmaxPriceGraphOracle::update(const FeedbackBatch& batch) {
  if (batch.edges.empty()) return;
  const Vec grad = batch_gradient(batch.context, batch.edges);
  theta_ -= lr_ * Eigen::Map<const Mat>(grad.data(), theta_.rows(), theta_.cols());
}

void SoftmaxPriceGraphOracle::reset(std::uint64_t) { theta_.setZero(); }

Vec SoftmaxPriceGraphOracle::parameters() const {
  return Eigen::Map<const Vec>(theta_.data(), theta_.size());
}

void SoftmaxPriceGraphOracle::set_parameters(const Vec& theta) {
  if (theta.size() != theta_.size())
    throw std::invalid_argument("SoftmaxPriceGraphOracle: parameter size mismatch");
  theta_ = Eigen::Map<const Mat>(theta.data(), theta_.rows(), theta_.cols());
}

// ---------------------------------------------------------------------------
// LogisticEdgeGraphOracle
// ---------------------------------------------------------------------------

LogisticEdgeGraphOracle::LogisticEdgeGraphOracle(int input_dim, int num_actions,
                                                 double lr)
    : num_actions_(num_actions),
      theta_(Mat::Zero(static_cast<long>(num_actions) * num_actions,
                       input_dim + 1)),
      lr_(lr) {
  if (input_dim < 1 || num_actions < 1)
    throw std::invalid_argument("LogisticEdgeGraphOracle: dimensions must be positive");
  if (lr <= 0.0)
    throw std::invalid_argument("LogisticEdgeGraphOracle: lr must be positive");
}

namespace {
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
}  // namespace

double LogisticEdgeGraphOracle::edge_prob(const Vec& x, int i, int j) const {
  check_action(i, num_actions_, "LogisticEdgeGraphOracle");
  check_action(j, num_actions_, "LogisticEdgeGraphOracle");
  const Vec xb = with_bias(x);
  return sigmoid(theta_.row(static_cast<long>(i) * num_actions_ + j).dot(xb));
}

GraphModel LogisticEdgeGraphOracle::predict(const Vec& x) const {
  const Vec xb = with_bias(x);
  if (xb.size() != theta_.cols())
    throw std::invalid_argument("LogisticEdgeGraphOracle: context dimension mismatch");
  Mat probs(num_actions_, num_actions_);
  for (int i = 0; i < num_actions_; ++i)
    for (int j = 0; j < num_actions_; ++j)
      probs(i, j) =
          sigmoid(theta_.row(static_cast<long>(i) * num_actions_ + j).dot(xb));
  return GraphModel(std::move(probs));
}

double LogisticEdgeGraphOracle::batch_loss(
    const Vec& x, const std::vector<EdgeObservation>& edges) const {
  if (edges.empty()) return 0.0;
  const Vec xb = with_bias(x);
  double total = 0.0;
  for (const auto& e : edges) {
    check_action(e.from, num_actions_, "LogisticEdgeGraphOracle");
    check_action(e.to, num_actions_, "LogisticEdgeGraphOracle");
    const double u =
        sigmoid(theta_.row(static_cast<long>(e.from) * num_actions_ + e.to).dot(xb));
    total += log_loss(u, e.present);
  }
  return total / static_cast<double>(edges.size());
}

Vec LogisticEdgeGraphOracle::batch_gradient(
    const Vec& x, const std::vector<EdgeObservation>& edges) const {
  Mat grad = Mat::Zero(theta_.rows(), theta_.cols());
  if (!edges.empty()) {
    const Vec xb = with_bias(x);
    const double scale = 1.0 / static_cast<double>(edges.size());
    for (const auto& e : edges) {
      const long row = static_cast<long>(e.from) * num_actions_ + e.to;
      const double u = sigmoid(theta_.row(row).dot(xb));
      const double dz = log_loss_du(u, e.present) * u * (1.0 - u);
      grad.row(row) += scale * dz * xb.transpose();
    }
  }
  return Eigen::Map<const Vec>(grad.data(), grad.size());
}

void LogisticEdgeGraphOracle::update(const FeedbackBatch& batch) {
  if (batch.edges.empty()) return;
  const Vec grad = batch_gradient(batch.context, batch.edges);
  theta_ -= lr_ * Eigen::Map<const Mat>(grad.data(), theta_.rows(), theta_.cols());
}

void LogisticEdgeGraphOracle::reset(std::uint64_t) { theta_.setZero(); }

Vec LogisticEdgeGraphOracle::parameters() const {
  return Eigen::Map<const Vec>(theta_.data(), theta_.size());
}

void LogisticEdgeGraphOracle::set_parameters(const Vec& theta) {
  if (theta.size() != theta_.size())
    throw std::invalid_argument("LogisticEdgeGraphOracle: parameter size mismatch");
  theta_ = Eigen::Map<const Mat>(theta.data(), theta_.rows(), theta_.cols());
}

// ---------------------------------------------------------------------------
// RegretLedger
// ---------------------------------------------------------------------------

void RegretLedger::add_round(double regret_inc, double sq_excess_inc,
                             double log_excess_inc) {
  regret_.push_back(regret_inc);
  sq_excess_.push_back(sq_excess_inc);
  log_excess_.push_back(log_excess_inc);
  cum_regret_ += regret_inc;
  cum_sq_excess_ += sq_excess_inc;
  cum_log_excess_ += log_excess_inc;
}

double RegretLedger::squared_loss_excess(const Vec& f_hat, const Vec& f_true,
                                         const std::vector<LossObservation>& obs) {
  double total = 0.0;
  for (const auto& o : obs) {
    const double rh = f_hat[o.action] - o.loss;
    const double rt = f_true[o.action] - o.loss;
    total += rh * rh - rt * rt;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Oracle suites
// ---------------------------------------------------------------------------

BiddingOracleSuite::BiddingOracleSuite(int input_dim, const BidGrid& grid,
                                       double loss_lr, double graph_lr,
                                       std::uint64_t seed)
    : loss_oracle_(input_dim, grid, loss_lr, derive_seed(seed, 1)),
      graph_oracle_(input_dim, grid.num_actions(), graph_lr) {}

RoundEstimates BiddingOracleSuite::predict(const Vec& x, Rng& rng) {
  last_bin_probs_ = graph_oracle_.bin_distribution(x);
  const int bin = rng.categorical(last_bin_probs_);
  RoundEstimates est;
  est.price_bin = bin;
  est.g = GraphModel::from_graph(bidding_graph_from_bin(num_actions(), bin));
  est.f = loss_oracle_.predict(x, bin);
  return est;
}

void BiddingOracleSuite::update(const FeedbackBatch& batch) {
  loss_oracle_.update(batch);
  graph_oracle_.update(batch);
}

double BiddingOracleSuite::edge_prob(int i, int j) const {
  if (last_bin_probs_.size() == 0)
    throw std::logic_error("BiddingOracleSuite: edge_prob before predict");
  return SoftmaxPriceGraphOracle::edge_probability(last_bin_probs_, i, j);
}

void BiddingOracleSuite::reset(std::uint64_t seed) {
  loss_oracle_.reset(derive_seed(seed, 1));
  graph_oracle_.reset(derive_seed(seed, 2));
  last_bin_probs_.resize(0);
}

BanditBiddingSuite::BanditBiddingSuite(int input_dim, const BidGrid& grid,
                                       double loss_lr, std::uint64_t seed)
    : loss_oracle_(input_dim, grid, loss_lr, derive_seed(seed, 1)),
      identity_(GraphModel::identity(grid.num_actions())) {}

RoundEstimates BanditBiddingSuite::predict(const Vec& x, Rng& rng) {
  RoundEstimates est;
  est.price_bin = rng.uniform_int(num_actions());
  est.g = identity_;
  est.f = loss_oracle_.predict(x, est.price_bin);
  return est;
}

void BanditBiddingSuite::update(const FeedbackBatch& batch) {
  loss_oracle_.update(batch);
}

void BanditBiddingSuite::reset(std::uint64_t seed) {
  loss_oracle_.reset(derive_seed(seed, 1));
}

GenericOracleSuite::GenericOracleSuite(int input_dim, int num_actions,
                                       double loss_lr, double graph_lr,
                                       std::uint64_t seed)
    : loss_oracle_(input_dim, num_actions, loss_lr),
      graph_oracle_(input_dim, num_actions, graph_lr) {
  loss_oracle_.reset(derive_seed(seed, 1));
  graph_oracle_.reset(derive_seed(seed, 2));
}

RoundEstimates GenericOracleSuite::predict(const Vec& x, Rng&) {
  last_context_ = x;
  RoundEstimates est;
  est.f = loss_oracle_.predict(x);
  est.g = graph_oracle_.predict(x);
  return est;
}

void GenericOracleSuite::update(const FeedbackBatch& batch) {
  loss_oracle_.update(batch);
  graph_oracle_.update(batch);
}

double GenericOracleSuite::edge_prob(int i, int j) const {
  if (last_context_.size() == 0)
    throw std::logic_error("GenericOracleSuite: edge_prob before predict");
  return graph_oracle_.edge_prob(last_context_, i, j);
}

void GenericOracleSuite::reset(std::uint64_t seed) {
  loss_oracle_.reset(derive_seed(seed, 1));
  graph_oracle_.reset(derive_seed(seed, 2));
  last_context_.resize(0);
}

BanditGenericSuite::BanditGenericSuite(int input_dim, int num_actions,
                                       double loss_lr, std::uint64_t seed)
    : loss_oracle_(input_dim, num_actions, loss_lr),
      identity_(GraphModel::identity(num_actions)) {
  loss_oracle_.reset(derive_seed(seed, 1));
}

RoundEstimates BanditGenericSuite::predict(const Vec& x, Rng&) {
  RoundEstimates est;
  est.f = loss_oracle_.predict(x);
  est.g = identity_;
  return est;
}

void BanditGenericSuite::update(const FeedbackBatch& batch) {
  loss_oracle_.update(batch);
}

void BanditGenericSuite::reset(std::uint64_t seed) {
  loss_oracle_.reset(derive_seed(seed, 1));
}

}  // namespace graphband
