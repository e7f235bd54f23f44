#include "graphband/dec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace graphband {

void DecProblem::validate() const {
  const int k = num_actions();
  if (k < 1) throw std::invalid_argument("DecProblem: empty loss vector");
  if (g.num_actions() != k)
    throw std::invalid_argument("DecProblem: graph size does not match f");
  if (!(gamma >= 4.0))
    throw std::invalid_argument("DecProblem: gamma must be at least 4");
  for (int i = 0; i < k; ++i)
    if (!(f[i] >= 0.0 && f[i] <= 1.0))
      throw std::invalid_argument("DecProblem: f entries must lie in [0, 1]");
}

namespace {

void check_distribution(const Vec& p, int k, const char* who) {
  if (static_cast<int>(p.size()) != k)
    throw std::invalid_argument(std::string(who) + ": p has wrong size");
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    if (p[i] < -1e-12)
      throw std::invalid_argument(std::string(who) + ": p has negative mass");
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(who) + ": p does not sum to 1");
}

void check_positive_weights(const Vec& w, const char* who) {
  for (int j = 0; j < w.size(); ++j)
    if (!(w[j] > 0.0))
      throw std::invalid_argument(
          std::string(who) + ": action " + std::to_string(j) +
          " has zero observation weight under p");
}

// Shared per-p state for evaluating the inner maximum at every benchmark
// action in O(K) total.  The stationary maximizer v_j = f_j +
// 2 (p_j - 1[j = i_star]) / (gamma w_j) only depends on i_star at the single
// coordinate j = i_star, so one pass over a benchmark-free base vector plus
// an O(1) correction per benchmark action covers all of them.
class DecEvaluator {
 public:
  explicit DecEvaluator(const DecProblem& prob) : prob_(prob) {}

  void set_p(const Vec& p) {
    const int k = prob_.num_actions();
    p_ = p;
    w_ = observation_weights(prob_.g, p);
    check_positive_weights(w_, "dec_value");
    v_base_.resize(k);
    base_.resize(k);
    base_sum_ = 0.0;
    for (int j = 0; j < k; ++j) {
      double vj = prob_.f[j] + 2.0 * p[j] / (prob_.gamma * w_[j]);
      if (prob_.domain == VDomain::clamped) vj = clamp01(vj);
      v_base_[j] = vj;
      const double dj = prob_.f[j] - vj;
      base_[j] = p[j] * vj - 0.25 * prob_.gamma * w_[j] * dj * dj;
      base_sum_ += base_[j];
    }
  }

  double value_at(int i_star) const {
    return base_sum_ - base_[i_star] + special_term(i_star);
  }

  std::pair<double, int> max_value() const {
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < prob_.num_actions(); ++i) {
      const double value = value_at(i);
      if (value > best) {  // strict: ties keep the smallest index
        best = value;
        best_i = i;
      }
    }
    return {best, best_i};
  }

  Vec v_star(int i_star) const {
    Vec v = v_base_;
    v[i_star] = special_v(i_star);
    return v;
  }

  const Vec& weights() const { return w_; }

 private:
  double special_v(int i_star) const {
    double vj = prob_.f[i_star] +
                2.0 * (p_[i_star] - 1.0) / (prob_.gamma * w_[i_star]);
    if (prob_.domain == VDomain::clamped) vj = clamp01(vj);
    return vj;
  }

  double special_term(int i_star) const {
    const double vj = special_v(i_star);
    const double dj = prob_.f[i_star] - vj;
    return (p_[i_star] - 1.0) * vj -
           0.25 * prob_.gamma * w_[i_star] * dj * dj;
  }

  const DecProblem& prob_;
  Vec p_, w_, v_base_, base_;
  double base_sum_ = 0.0;
};

}  // namespace

Vec observation_weights(const GraphModel& g, const Vec& p) {
  check_distribution(p, g.num_actions(), "observation_weights");
  if (g.is_identity()) return p;
  return g.probs().transpose() * p;
}

double dec_objective(const DecProblem& prob, const Vec& p, int i_star,
                     const Vec& v) {
  prob.validate();
  const int k = prob.num_actions();
  check_distribution(p, k, "dec_objective");
  if (i_star < 0 || i_star >= k)
    throw std::out_of_range("dec_objective: i_star out of range");
  if (static_cast<int>(v.size()) != k)
    throw std::invalid_argument("dec_objective: v has wrong size");
  const Vec w = observation_weights(prob.g, p);
  double value = 0.0;
  for (int j = 0; j < k; ++j) {
    const double dj = prob.f[j] - v[j];
    value += (p[j] - (j == i_star ? 1.0 : 0.0)) * v[j] -
             0.25 * prob.gamma * w[j] * dj * dj;
  }
  return value;
}

DecInnerSolution dec_inner_max(const DecProblem& prob, const Vec& p,
                               int i_star) {
  prob.validate();
  const int k = prob.num_actions();
  check_distribution(p, k, "dec_inner_max");
  if (i_star < 0 || i_star >= k)
    throw std::out_of_range("dec_inner_max: i_star out of range");
  const Vec w = observation_weights(prob.g, p);
  check_positive_weights(w, "dec_inner_max");

  DecInnerSolution sol;
  sol.v_star.resize(k);
  double value = 0.0;
  for (int j = 0; j < k; ++j) {
    const double coef = p[j] - (j == i_star ? 1.0 : 0.0);
    double vj = prob.f[j] + 2.0 * coef / (prob.gamma * w[j]);
    if (prob.domain == VDomain::clamped) vj = clamp01(vj);
    sol.v_star[j] = vj;
    const double dj = prob.f[j] - vj;
    value += coef * vj - 0.25 * prob.gamma * w[j] * dj * dj;
  }
  sol.value = value;
  return sol;
}

std::pair<double, int> dec_value_argmax(const DecProblem& prob, const Vec& p) {
  prob.validate();
  check_distribution(p, prob.num_actions(), "dec_value");
  DecEvaluator eval(prob);
  eval.set_p(p);
  return eval.max_value();
}

double dec_value(const DecProblem& prob, const Vec& p) {
  return dec_value_argmax(prob, p).first;
}

namespace {

// Subgradient of dec_value at p from the active benchmark action's inner
// solution: the bracket is affine in p once v is fixed, with slope
// d/dp_i = v_i - (gamma/4) sum_j g(i, j) (f_j - v_j)^2.
Vec dec_subgradient(const DecProblem& prob, const Vec& v_star) {
  const int k = prob.num_actions();
  Vec d2(k);
  for (int j = 0; j < k; ++j) {
    const double dj = prob.f[j] - v_star[j];
    d2[j] = dj * dj;
  }
  Vec grad(k);
  if (prob.g.is_identity()) {
    for (int i = 0; i < k; ++i)
      grad[i] = v_star[i] - 0.25 * prob.gamma * d2[i];
  } else {
    const Vec gd2 = prob.g.probs() * d2;
    for (int i = 0; i < k; ++i)
      grad[i] = v_star[i] - 0.25 * prob.gamma * gd2[i];
  }
  return grad;
}

}  // namespace

DecMinimizeResult minimize_dec(const DecProblem& prob, double tol,
                               int max_iters, double step) {
  prob.validate();
  const int k = prob.num_actions();
  if (max_iters < 1)
    throw std::invalid_argument("minimize_dec: max_iters must be positive");
  if (tol < 0.0) tol = 1e-3 / prob.gamma;
  if (step < 0.0) step = 0.5 / prob.gamma;

  DecMinimizeResult result;
  if (k == 1) {
    result.p = Vec::Ones(1);
    result.value = dec_value(prob, result.p);
    result.gap = 0.0;
    result.converged = true;
    return result;
  }

  const double floor = 1.0 / (prob.gamma * k);
  const double free_mass = 1.0 - 1.0 / prob.gamma;  // = 1 - K * floor
  Vec q = Vec::Constant(k, 1.0 / k);
  DecEvaluator eval(prob);

  double best_value = std::numeric_limits<double>::infinity();
  Vec best_p;
  double lower_bound = -std::numeric_limits<double>::infinity();

  int iter = 0;
  for (; iter < max_iters; ++iter) {
    const Vec p = Vec::Constant(k, floor) + free_mass * q;
    eval.set_p(p);
    const auto [value, i_star] = eval.max_value();
    const Vec grad = dec_subgradient(prob, eval.v_star(i_star));

    if (value < best_value) {
      best_value = value;
      best_p = p;
    }
    // Linearization certificate: dec_value is convex in p, so for feasible
    // p' we have value(p') >= value(p) + <grad, p' - p>; minimizing the right
    // side over the floored simplex bounds the optimum from below.
    const double lin_min = floor * grad.sum() + free_mass * grad.minCoeff();
    lower_bound = std::max(lower_bound, value - (grad.dot(p) - lin_min));
    if (best_value - lower_bound <= tol) {
      result.converged = true;
      ++iter;
      break;
    }

    // Exponentiated gradient step on the free part, with centered and
    // clipped exponents for numerical safety.
    Vec expo = (-step * free_mass) * grad;
    expo.array() -= expo.maxCoeff();
    for (int i = 0; i < k; ++i)
      q[i] *= std::exp(std::max(expo[i], -40.0));
    const double z = q.sum();
    if (!(z > 0.0)) {
      q.setConstant(1.0 / k);  // all mass underflowed; restart from uniform
    } else {
      q /= z;
    }
  }

  // Fixed-step EG positions p well but stalls short of tight tolerances on
  // hard instances (gradients scale with gamma near the floor).  For small K
  // a cyclic pairwise mass-transfer descent closes the remaining distance:
  // the objective is convex along every edge direction of the simplex, so a
  // ternary line search per pair is exact.
  constexpr int kPolishLimit = 12;
  if (!result.converged && k <= kPolishLimit) {
    Vec q_best = (best_p.array() - floor) / free_mass;
    auto value_at = [&](const Vec& qq) {
      eval.set_p(Vec::Constant(k, floor) + free_mass * qq);
      return eval.max_value().first;
    };
    bool improved = true;
    for (int sweep = 0; sweep < 30 && improved; ++sweep) {
      improved = false;
      for (int a = 0; a < k; ++a) {
        if (q_best[a] <= 0.0) continue;
        for (int b = 0; b < k; ++b) {
          if (b == a) continue;
          auto slice = [&](double t) {
            Vec qq = q_best;
            qq[a] -= t;
            qq[b] += t;
            return value_at(qq);
          };
          double lo = 0.0, hi = q_best[a];
          for (int it = 0; it < 48; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (slice(m1) <= slice(m2)) {
              hi = m2;
            } else {
              lo = m1;
            }
          }
          const double t = 0.5 * (lo + hi);
          const double candidate = slice(t);
          if (candidate < best_value - 1e-14) {
            best_value = candidate;
            q_best[a] -= t;
            q_best[b] += t;
            improved = true;
          }
        }
      }
    }
    best_p = Vec::Constant(k, floor) + free_mass * q_best;
    // Recompute exactly and tighten the certificate at the polished point.
    eval.set_p(best_p);
    const auto [polished, i_star] = eval.max_value();
    best_value = polished;
    const Vec grad = dec_subgradient(prob, eval.v_star(i_star));
    const double lin_min = floor * grad.sum() + free_mass * grad.minCoeff();
    lower_bound = std::max(lower_bound, polished - (grad.dot(best_p) - lin_min));
    result.converged = best_value - lower_bound <= tol;
  }

  result.p = best_p;
  result.value = best_value;
  result.gap = std::max(0.0, best_value - lower_bound);
  result.iterations = iter;
  return result;
}

Vec closed_form_bidding_policy(const Vec& f, int bin, double gamma) {
  const int k = static_cast<int>(f.size());
  if (k < 1) throw std::invalid_argument("closed_form_bidding_policy: empty f");
  if (bin < 0 || bin >= k)
    throw std::out_of_range("closed_form_bidding_policy: bin out of range");
  if (!(gamma >= 4.0))
    throw std::invalid_argument("closed_form_bidding_policy: gamma must be >= 4");
  Vec p = Vec::Zero(k);
  if (bin == 0) {
    p[0] = 1.0;
    return p;
  }
  const double fb = f[bin];
  double p0;
  if (fb <= 0.5)
    p0 = 1.0 / (2.0 + gamma * (0.5 - fb));
  else
    p0 = 1.0 - 1.0 / (2.0 + gamma * (fb - 0.5));
  p[0] = p0;
  p[bin] = 1.0 - p0;
  return p;
}

}  // namespace graphband
