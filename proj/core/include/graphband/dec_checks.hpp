#pragma once

#include "graphband/dec.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace graphband {

// AM-GM style inequality underlying the graph-translation arguments:
// 3 z' + (z - z')^2 / (z + z') >= z for all z, z' > 0.
bool check_amgm_inequality(double z, double z_prime, double tol = 1e-12);

struct AmgmSweepReport {
  int checked = 0;
  int violations = 0;
  double worst_margin = 0.0;  // most negative slack seen
};

// Random sweep of the inequality over (0, hi]^2.
AmgmSweepReport sweep_amgm(int num_pairs, std::uint64_t seed, double hi = 10.0,
                           double tol = 1e-12);

struct ClosedFormBoundReport {
  int checked = 0;
  int violations = 0;
  double max_ratio = 0.0;      // max dec / (4/gamma)
  double worst_excess = 0.0;   // max dec - 4/gamma
};

// Samples random (value estimate, competing price) pairs on uniform bid
// grids, builds the induced loss predictions and threshold feedback graph,
// and checks that the closed-form two-point policy keeps the relaxed DEC at
// or below 4/gamma (+ tol).
ClosedFormBoundReport verify_closed_form_bound(std::span<const double> epsilons,
                                               std::span<const double> gammas,
                                               int pairs_per_cell,
                                               std::uint64_t seed,
                                               double tol = 1e-9);

struct TranslationReport {
  bool holds = false;
  double perturbed_value = 0.0;  // grid approximation of the perturbed DEC
  double dec = 0.0;              // clamped DEC at the same p
  double margin = 0.0;           // dec + slack - perturbed_value
};

// Grid verification that the graph-perturbed DEC with weights
// (gamma1, gamma2) = (3/4 gamma, 1/4 gamma) never exceeds the plain DEC at
// the same play distribution.  The adversary's value vector ranges over a
// grid on [0, 1]^K and each perturbation entry M(i, j) over a grid on [0, 1]
// (the M-maximization separates per entry).
TranslationReport check_dec_translation(const DecProblem& prob, const Vec& p,
                                        int v_steps, int m_steps,
                                        double slack = 1e-9);

struct StabilityReport {
  bool holds = false;
  double lhs = 0.0;      // minimized DEC at gamma under g'
  double rhs = 0.0;      // minimized DEC at gamma/3 under g plus the penalty
  double penalty = 0.0;  // (gamma/12) * total triangular discrimination
};

// Swapping the graph costs at most a constant gamma shrink plus the total
// triangular discrimination between the two graphs:
//   min_p dec_gamma(p; f, g') <= min_p dec_{gamma/3}(p; f, g) + penalty.
// Requires gamma >= 12 so both solves stay in the valid gamma range.
StabilityReport check_graph_stability(const Vec& f, const GraphModel& g,
                                      const GraphModel& g_prime, double gamma,
                                      double slack = 1e-3);

struct GraphStructureReport {
  int graphs_checked = 0;
  int strong_failures = 0;
  int alpha_checked = 0;
  int alpha_failures = 0;
};

// Structural sweep over bidding feedback graphs: every graph must be
// strongly observable, and its independence number must not exceed 2
// (exactly via brute force for K <= 25, and by excluding independent triples
// beyond that).
GraphStructureReport verify_bidding_graph_structure(
    std::span<const int> grid_steps, int num_w, std::uint64_t seed);

}  // namespace graphband
