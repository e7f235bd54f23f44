#include "graphband/dec_checks.hpp"

#include "graphband/losses.hpp"
#include "graphband/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace graphband {

bool check_amgm_inequality(double z, double z_prime, double tol) {
  if (!(z > 0.0 && z_prime > 0.0))
    throw std::invalid_argument("check_amgm_inequality: arguments must be positive");
  const double lhs = 3.0 * z_prime + (z - z_prime) * (z - z_prime) / (z + z_prime);
  return lhs >= z - tol;
}

AmgmSweepReport sweep_amgm(int num_pairs, std::uint64_t seed, double hi,
                           double tol) {
  Rng rng(seed);
  AmgmSweepReport report;
  for (int n = 0; n < num_pairs; ++n) {
    // (0, hi]: shift away from zero to respect the strict positivity domain.
    const double z = hi * (1.0 - rng.uniform01());
    const double zp = hi * (1.0 - rng.uniform01());
    const double margin =
        3.0 * zp + (z - zp) * (z - zp) / (z + zp) - z;
    ++report.checked;
    if (margin < -tol) ++report.violations;
    report.worst_margin = std::min(report.worst_margin, margin);
  }
  return report;
}

ClosedFormBoundReport verify_closed_form_bound(std::span<const double> epsilons,
                                               std::span<const double> gammas,
                                               int pairs_per_cell,
                                               std::uint64_t seed, double tol) {
  ClosedFormBoundReport report;
  report.worst_excess = -std::numeric_limits<double>::infinity();
  for (const double eps : epsilons) {
    const BidGrid grid = BidGrid::uniform(eps);
    const int k = grid.num_actions();
    for (const double gamma : gammas) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k) * 1000 +
                                    static_cast<std::uint64_t>(gamma)));
      for (int n = 0; n < pairs_per_cell; ++n) {
        const double v_hat = rng.uniform01();
        const double w_hat = rng.uniform01();
        const int bin = grid.smallest_bid_at_least(w_hat);
        DecProblem prob;
        prob.f = bidding_loss_predictions(v_hat, bin, grid);
        prob.g = GraphModel::from_graph(bidding_graph_from_bin(k, bin));
        prob.gamma = gamma;
        prob.domain = VDomain::relaxed;
        const Vec p = closed_form_bidding_policy(prob.f, bin, gamma);
        const double dec = dec_value(prob, p);
        const double bound = 4.0 / gamma;
        ++report.checked;
        if (dec > bound + tol) ++report.violations;
        report.max_ratio = std::max(report.max_ratio, dec / bound);
        report.worst_excess = std::max(report.worst_excess, dec - bound);
      }
    }
  }
  return report;
}

TranslationReport check_dec_translation(const DecProblem& prob, const Vec& p,
                                        int v_steps, int m_steps,
                                        double slack) {
  DecProblem clamped = prob;
  clamped.domain = VDomain::clamped;
  clamped.validate();
  if (v_steps < 1 || m_steps < 1)
    throw std::invalid_argument("check_dec_translation: need positive grid steps");
  const int k = clamped.num_actions();
  const double gamma1 = 0.75 * clamped.gamma;
  const double gamma2 = 0.25 * clamped.gamma;

  // Best perturbation response for one squared error s = (f_j - v_j)^2 and
  // one graph entry: max over M in [0, 1] of -gamma1 M s - gamma2 tri(M, g).
  const auto psi = [&](double s, double g) {
    double best = -std::numeric_limits<double>::infinity();
    for (int m = 0; m <= m_steps; ++m) {
      const double mm = static_cast<double>(m) / m_steps;
      best = std::max(best, -gamma1 * mm * s -
                                gamma2 * triangular_discrimination(mm, g));
    }
    return best;
  };

  // The benchmark-action part max_{i*} (sum_i p_i v_i - v_{i*}) only needs
  // the smallest v coordinate, so the search is over the v grid alone.
  double perturbed = -std::numeric_limits<double>::infinity();
  std::vector<int> idx(k, 0);
  Vec v(k);
  while (true) {
    for (int j = 0; j < k; ++j) v[j] = static_cast<double>(idx[j]) / v_steps;
    double value = p.dot(v) - v.minCoeff();
    for (int i = 0; i < k; ++i) {
      if (p[i] == 0.0) continue;
      double inner = 0.0;
      for (int j = 0; j < k; ++j) {
        const double dj = clamped.f[j] - v[j];
        inner += psi(dj * dj, clamped.g.prob(i, j));
      }
      value += p[i] * inner;
    }
    perturbed = std::max(perturbed, value);

    int at = 0;
    while (at < k && ++idx[at] > v_steps) idx[at++] = 0;
    if (at == k) break;
  }

  TranslationReport report;
  report.perturbed_value = perturbed;
  report.dec = dec_value(clamped, p);
  report.margin = report.dec + slack - perturbed;
  report.holds = report.margin >= 0.0;
  return report;
}

StabilityReport check_graph_stability(const Vec& f, const GraphModel& g,
                                      const GraphModel& g_prime, double gamma,
                                      double slack) {
  if (!(gamma >= 12.0))
    throw std::invalid_argument("check_graph_stability: gamma must be >= 12");
  if (g.num_actions() != g_prime.num_actions())
    throw std::invalid_argument("check_graph_stability: graph size mismatch");
  const int k = g.num_actions();

  DecProblem lhs_prob{f, g_prime, gamma, VDomain::clamped};
  DecProblem rhs_prob{f, g, gamma / 3.0, VDomain::clamped};

  StabilityReport report;
  report.lhs = minimize_dec(lhs_prob).value;
  double tri_total = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      tri_total += triangular_discrimination(g.prob(i, j), g_prime.prob(i, j));
  report.penalty = gamma / 12.0 * tri_total;
  report.rhs = minimize_dec(rhs_prob).value + report.penalty;
  report.holds = report.lhs <= report.rhs + slack;
  return report;
}

GraphStructureReport verify_bidding_graph_structure(
    std::span<const int> grid_steps, int num_w, std::uint64_t seed) {
  GraphStructureReport report;
  for (const int steps : grid_steps) {
    const BidGrid grid = BidGrid::uniform_steps(steps);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(steps)));
    for (int n = 0; n < num_w; ++n) {
      // Mix uniform draws with exact grid points to hit the boundary cases.
      double w;
      if (n % 3 == 2) w = grid.bid(rng.uniform_int(grid.num_actions()));
      else w = rng.uniform01();
      const FeedbackGraph graph = build_bidding_graph(grid, w);
      ++report.graphs_checked;
      if (!is_strongly_observable(graph)) ++report.strong_failures;
      ++report.alpha_checked;
      if (graph.num_actions() <= 25) {
        if (independence_number(graph) > 2) ++report.alpha_failures;
      } else {
        if (!independence_at_most_two(graph)) ++report.alpha_failures;
      }
    }
  }
  return report;
}

}  // namespace graphband
