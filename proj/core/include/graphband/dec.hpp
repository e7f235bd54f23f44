#pragma once

#include "graphband/common.hpp"
#include "graphband/feedback_graph.hpp"

namespace graphband {

// Domain of the adversary's value vector v in the decision-estimation
// objective: either all of R^K (which admits a closed-form stationary
// maximizer) or the box [0, 1]^K (the bounded-loss setting).
enum class VDomain { relaxed, clamped };

// One instance of the per-round decision-estimation problem: predicted
// losses f in [0, 1]^K, a predicted feedback graph, and the exploration
// parameter gamma >= 4.
struct DecProblem {
  Vec f;
  GraphModel g;
  double gamma = 4.0;
  VDomain domain = VDomain::clamped;

  int num_actions() const { return static_cast<int>(f.size()); }
  void validate() const;
};

// Expected observation count of each action under play distribution p:
// w[j] = sum_i p[i] * g(i, j).
Vec observation_weights(const GraphModel& g, const Vec& p);

struct DecInnerSolution {
  Vec v_star;     // maximizing value vector
  double value;   // objective value at (i_star, v_star)
};

// Objective of the inner bracket at a specific (i_star, v):
//   sum_i p_i v_i - v_{i_star} - (gamma/4) sum_j w_j (f_j - v_j)^2.
double dec_objective(const DecProblem& prob, const Vec& p, int i_star,
                     const Vec& v);

// Maximize the bracket over v for a fixed benchmark action i_star.  The
// objective separates per coordinate; the unconstrained stationary point is
// v_j = f_j + 2 (p_j - 1[j = i_star]) / (gamma w_j), and the clamped domain
// projects it onto [0, 1] coordinatewise.  Requires every observation weight
// to be positive.
DecInnerSolution dec_inner_max(const DecProblem& prob, const Vec& p,
                               int i_star);

// Full decision-estimation coefficient of p: the inner maximum over both the
// benchmark action and the value vector.  Ties between benchmark actions
// break toward the smallest index.
double dec_value(const DecProblem& prob, const Vec& p);
// Same, also reporting the maximizing benchmark action.
std::pair<double, int> dec_value_argmax(const DecProblem& prob, const Vec& p);

struct DecMinimizeResult {
  Vec p;             // best iterate found
  double value;      // dec_value at p
  double gap;        // certified bound on value - min over the feasible set
  int iterations = 0;
  bool converged = false;
};

// Minimize dec_value over the floored simplex {p : p_j >= 1/(gamma K)} by
// exponentiated gradient on the free part of p = 1/(gamma K) + (1 - 1/gamma) q.
// Subgradients come from the active benchmark action's inner solution; the
// reported gap is a duality-style certificate computed from the linearization
// at each iterate.  Negative tol or step select the defaults tol = 1e-3/gamma
// and step = 0.5/gamma.
DecMinimizeResult minimize_dec(const DecProblem& prob, double tol = -1.0,
                               int max_iters = 2000, double step = -1.0);

// Closed-form two-point policy for bidding feedback graphs: all mass splits
// between the cheapest bid and the cheapest predicted-winning bid b, with the
// split driven by how far f_b sits from 1/2.  When b is the cheapest bid the
// policy is a point mass on it.  Guarantees a relaxed DEC of at most 4/gamma.
Vec closed_form_bidding_policy(const Vec& f, int bin, double gamma);

}  // namespace graphband
