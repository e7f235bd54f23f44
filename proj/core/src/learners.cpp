#include "graphband/learners.hpp"

#include "graphband/losses.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace graphband {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool uses_solver(Algorithm a) {
  return a == Algorithm::squarecb_ug || a == Algorithm::squarecb;
}

double initial_gamma(const LearnerConfig& cfg, int num_actions, int horizon,
                     double reg_bound) {
  if (!uses_solver(cfg.algorithm)) return kNaN;
  const double t = static_cast<double>(horizon);
  if (cfg.doubling) return std::max(4.0, std::sqrt(t / reg_bound));
  if (cfg.algorithm == Algorithm::squarecb) {
    return std::max(4.0, cfg.gamma_scale * std::sqrt(num_actions * t));
  }
  return std::max(4.0, cfg.gamma_scale * std::sqrt(t));
}

}  // namespace

Learner::Learner(Environment& env, LearnerConfig config)
    : env_(env),
      cfg_(config),
      rng_(derive_seed(config.seed, 101)),
      oracle_seed_(derive_seed(config.seed, 202)) {
  if (cfg_.gamma_scale <= 0.0) {
    throw std::invalid_argument("gamma_scale must be positive");
  }
  reg_bound_ = cfg_.reg_bound > 0.0
                   ? cfg_.reg_bound
                   : std::sqrt(static_cast<double>(env_.horizon()));
  gamma_ = initial_gamma(cfg_, env_.num_actions(), env_.horizon(), reg_bound_);
  suite_ = env_.make_oracles(cfg_.algorithm, cfg_.loss_lr, cfg_.graph_lr,
                             oracle_seed_);
  if (auto* bidding = dynamic_cast<BiddingEnvironment*>(&env_)) {
    grid_ = &bidding->grid();
  }
}

Vec Learner::choose_distribution(const RoundEstimates& est, double* dec_out) {
  const int k = env_.num_actions();
  *dec_out = kNaN;
  switch (cfg_.algorithm) {
    case Algorithm::trivial: {
      Vec p = Vec::Zero(k);
      p[0] = 1.0;  // always bid the lowest price
      return p;
    }
    case Algorithm::greedy: {
      int best = 0;
      for (int i = 1; i < k; ++i) {
        if (est.f[i] < est.f[best]) best = i;
      }
      Vec p = Vec::Zero(k);
      p[best] = 1.0;
      return p;
    }
    case Algorithm::squarecb_ug:
      if (cfg_.policy_mode == PolicyMode::closed_form_bidding) {
        if (est.price_bin < 0) {
          throw std::logic_error(
              "closed-form policy needs a bidding price bin");
        }
        Vec p = closed_form_bidding_policy(est.f, est.price_bin, gamma_);
        DecProblem prob{est.f, est.g, gamma_, VDomain::relaxed};
        *dec_out = dec_value(prob, p);
        return p;
      }
      [[fallthrough]];
    case Algorithm::squarecb: {
      // SquareCB runs the same solver but est.g is the identity model.
      DecProblem prob{est.f, est.g, gamma_, VDomain::clamped};
      DecMinimizeResult res =
          minimize_dec(prob, /*tol=*/-1.0, cfg_.solver_max_iters);
      *dec_out = res.value;
      return std::move(res.p);
    }
  }
  throw std::logic_error("unknown algorithm");
}

RoundTranscript Learner::step() {
  if (done()) throw std::runtime_error("environment exhausted");
  const int t = t_++;
  const int k = env_.num_actions();
  const Vec& x = env_.context(t);

  RoundEstimates est;
  if (suite_) {
    est = suite_->predict(x, rng_);
  } else {
    est.f = Vec::Zero(k);
    est.g = GraphModel::identity(k);
  }

  RoundTranscript tr;
  tr.round = t;
  tr.epoch = epoch_;
  tr.gamma = gamma_;
  tr.price_bin = est.price_bin;
  tr.p = choose_distribution(est, &tr.dec_value);
  tr.action = rng_.categorical(tr.p);
  tr.bid = grid_ ? grid_->bid(tr.action) : kNaN;

  RoundFeedback fb = env_.step(t, tr.action, cfg_.feedback_mode);
  tr.observed = fb.losses;
  tr.value_observed = fb.value_observed;

  const Vec& truth = env_.true_losses(t);
  tr.regret_increment = truth[tr.action] - truth.minCoeff();

  // Assemble the oracle batch.
  FeedbackBatch batch;
  batch.context = x;
  batch.value_observed = fb.value_observed;
  batch.price_bin = est.price_bin;
  const bool bandit = cfg_.algorithm == Algorithm::squarecb;
  if (cfg_.algorithm != Algorithm::trivial) {
    for (const auto& obs : fb.losses) {
      if (bandit && obs.action != tr.action) continue;
      batch.losses.push_back(obs);
    }
  }
  if (!bandit && cfg_.algorithm != Algorithm::trivial) {
    if (cfg_.feedback_mode == FeedbackMode::partial) {
      std::vector<bool> seen(k, false);
      for (const auto& obs : fb.losses) seen[obs.action] = true;
      for (int j = 0; j < k; ++j) {
        batch.edges.push_back({tr.action, j, seen[j] ? 1.0 : 0.0});
      }
    } else {
      const FeedbackGraph& g = *fb.realized_graph;
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          batch.edges.push_back({i, j, g.edge(i, j) ? 1.0 : 0.0});
        }
      }
    }
  }

  // Oracle-excess bookkeeping against the environment's ground truth,
  // evaluated at the pre-update predictions.
  double sq_excess = 0.0;
  for (const auto& obs : batch.losses) {
    const double fhat = est.f[obs.action];
    const double fstar = truth[obs.action];
    sq_excess += (fhat - obs.loss) * (fhat - obs.loss) -
                 (fstar - obs.loss) * (fstar - obs.loss);
  }
  double log_excess = 0.0;
  if (suite_) {
    for (const auto& e : batch.edges) {
      const double label = e.present;
      const double ghat = suite_->edge_prob(e.from, e.to);
      const double gstar = env_.true_edge_prob(t, e.from, e.to);
      log_excess += log_loss(ghat, label) - log_loss(gstar, label);
    }
  }
  ledger_.add_round(tr.regret_increment, sq_excess, log_excess);

  if (suite_) suite_->update(batch);

  if (cfg_.record_batches) {
    tr.loss_batch = std::move(batch.losses);
    tr.edge_batch = std::move(batch.edges);
  }

  // Doubling trick: restart once the accumulated DEC mass exceeds the
  // budget for the current epoch.
  if (cfg_.doubling && uses_solver(cfg_.algorithm)) {
    dec_sum_ += tr.dec_value;
    if (dec_sum_ > gamma_ * reg_bound_) {
      ++epoch_;
      gamma_ *= 2.0;
      dec_sum_ = 0.0;
      if (suite_) suite_->reset(oracle_seed_);
    }
  }
  return tr;
}

RunResult run_learner(Environment& env, const LearnerConfig& config) {
  Learner learner(env, config);
  RunResult out;
  out.transcripts.reserve(env.horizon());
  while (!learner.done()) out.transcripts.push_back(learner.step());
  out.num_epochs = learner.epoch();
  out.ledger = learner.ledger();
  return out;
}

}  // namespace graphband
