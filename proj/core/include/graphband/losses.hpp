#pragma once

#include "graphband/common.hpp"
#include "graphband/feedback_graph.hpp"

#include <cmath>

namespace graphband {

// Probabilities inside [kLogLossClamp, 1 - kLogLossClamp] before taking logs,
// so the log loss stays finite at the endpoints.
inline constexpr double kLogLossClamp = 1e-9;

// Binary log loss of predicting probability u against outcome b in [0, 1].
inline double log_loss(double u, double b) {
  const double uc = std::min(1.0 - kLogLossClamp, std::max(kLogLossClamp, u));
  return -(b * std::log(uc) + (1.0 - b) * std::log(1.0 - uc));
}

// Derivative of log_loss in its first argument, zero inside the clamp region
// (the clamped loss is locally constant there).
inline double log_loss_du(double u, double b) {
  if (u <= kLogLossClamp || u >= 1.0 - kLogLossClamp) return 0.0;
  return (u - b) / (u * (1.0 - u));
}

// Triangular discrimination (u - g)^2 / (u + g), with the 0/0 case defined
// as 0 (both arguments zero means the predictions agree exactly).
inline double triangular_discrimination(double u, double g) {
  const double s = u + g;
  if (s == 0.0) return 0.0;
  const double d = u - g;
  return d * d / s;
}

// First-price auction loss of bidding a with value v against the highest
// competing bid w: winning (a >= w) yields utility v - a, losing yields 0,
// and the utility is mapped into a [0, 1] loss.
inline double bidding_loss(double a, double w, double v) {
  const double utility = (a >= w) ? (v - a) : 0.0;
  return 0.5 * (1.0 - utility);
}

// Loss of every bid on the grid for one auction outcome.
inline Vec bidding_loss_vector(const BidGrid& grid, double w, double v) {
  Vec losses(grid.num_actions());
  for (int i = 0; i < grid.num_actions(); ++i)
    losses[i] = bidding_loss(grid.bid(i), w, v);
  return losses;
}

}  // namespace graphband
