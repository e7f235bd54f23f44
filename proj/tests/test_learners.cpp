#include <doctest.h>

#include "graphband/environments.hpp"
#include "graphband/learners.hpp"

#include <cmath>
#include <vector>

using namespace graphband;

namespace {

BiddingEnvironment make_bidding_env(int rounds, int grid_steps,
                                    std::uint64_t seed) {
  SyntheticParams params;
  params.rounds = rounds;
  return BiddingEnvironment(generate_synthetic(params, seed),
                            BidGrid::uniform_steps(grid_steps));
}

GraphModel all_ones_model(int k) { return GraphModel(Mat::Ones(k, k)); }

LearnerConfig base_config(Algorithm alg) {
  LearnerConfig cfg;
  cfg.algorithm = alg;
  cfg.seed = 7;
  cfg.record_batches = true;
  return cfg;
}

bool same_transcript(const RoundTranscript& a, const RoundTranscript& b) {
  const bool gamma_same =
      (std::isnan(a.gamma) && std::isnan(b.gamma)) || a.gamma == b.gamma;
  return a.action == b.action && a.epoch == b.epoch && gamma_same &&
         a.regret_increment == b.regret_increment && (a.p - b.p).norm() == 0.0;
}

}  // namespace

TEST_CASE("partial feedback builds one edge row per action") {
  BiddingEnvironment env = make_bidding_env(40, 4, 1);
  const int k = env.num_actions();
  LearnerConfig cfg = base_config(Algorithm::squarecb_ug);
  const RunResult run = run_learner(env, cfg);
  REQUIRE(static_cast<int>(run.transcripts.size()) == 40);

  for (const auto& tr : run.transcripts) {
    REQUIRE(static_cast<int>(tr.edge_batch.size()) == k);
    std::vector<bool> seen(k, false);
    for (const auto& obs : tr.observed) seen[obs.action] = true;
    for (int j = 0; j < k; ++j) {
      CHECK(tr.edge_batch[j].from == tr.action);
      CHECK(tr.edge_batch[j].to == j);
      CHECK(tr.edge_batch[j].present == (seen[j] ? 1.0 : 0.0));
    }
    // The loss oracle sees every revealed loss.
    CHECK(tr.loss_batch.size() == tr.observed.size());
    // Winning reveals the value, and the transcript agrees with the auction.
    CHECK(tr.value_observed == (tr.bid >= env.round(tr.round).w));
    CHECK(tr.bid == env.grid().bid(tr.action));
  }
}

TEST_CASE("full feedback labels every pair from the realized graph") {
  GenericGraphEnvironment env(
      [](const Vec&) { return Vec::Constant(2, 0.5); },
      [](const Vec&) {
        Mat m(2, 2);
        m << 1.0, 0.5, 0.5, 1.0;
        return GraphModel(m);
      },
      2, 2, 30, 3);
  LearnerConfig cfg = base_config(Algorithm::squarecb_ug);
  cfg.feedback_mode = FeedbackMode::full;
  cfg.policy_mode = PolicyMode::dec_solver;
  const RunResult run = run_learner(env, cfg);
  for (const auto& tr : run.transcripts) {
    REQUIRE(tr.edge_batch.size() == 4);
    for (const auto& e : tr.edge_batch) {
      CHECK(e.present ==
            (env.realized_graph(tr.round).edge(e.from, e.to) ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("bandit baseline sees only the played loss and no graph") {
  BiddingEnvironment env = make_bidding_env(40, 4, 2);
  const RunResult run = run_learner(env, base_config(Algorithm::squarecb));
  for (const auto& tr : run.transcripts) {
    REQUIRE(tr.loss_batch.size() == 1);
    CHECK(tr.loss_batch[0].action == tr.action);
    CHECK(tr.edge_batch.empty());
    CHECK(tr.dec_value >= 0.0);  // solver value on the identity graph
  }
}

TEST_CASE("trivial baseline always bids zero and learns nothing") {
  BiddingEnvironment env = make_bidding_env(30, 4, 3);
  const RunResult run = run_learner(env, base_config(Algorithm::trivial));
  for (const auto& tr : run.transcripts) {
    CHECK(tr.action == 0);
    CHECK(tr.bid == 0.0);
    CHECK(tr.loss_batch.empty());
    CHECK(tr.edge_batch.empty());
    CHECK(std::isnan(tr.gamma));
    CHECK(std::isnan(tr.dec_value));
    const Vec& truth = env.true_losses(tr.round);
    CHECK(tr.regret_increment ==
          doctest::Approx(truth[0] - truth.minCoeff()).epsilon(1e-12));
    // Bidding zero against a positive competing price costs exactly 1/2.
    if (env.round(tr.round).w > 0.0) {
      REQUIRE(tr.observed.size() >= 1);
      CHECK(tr.observed[0].loss == 0.5);
    }
  }
  CHECK(run.num_epochs == 1);
}

TEST_CASE("greedy plays the smallest predicted loss with index tie-breaks") {
  Vec means(2);
  means << 0.9, 0.1;
  GenericGraphEnvironment env([&](const Vec&) { return means; },
                              [](const Vec&) { return all_ones_model(2); }, 2,
                              1, 50, 11,
                              GenericGraphEnvironment::LossNoise::none);
  LearnerConfig cfg = base_config(Algorithm::greedy);
  cfg.loss_lr = 0.2;
  const RunResult run = run_learner(env, cfg);

  // Zero-initialized predictions tie, so the first round breaks to index 0.
  CHECK(run.transcripts[0].action == 0);
  CHECK(std::isnan(run.transcripts[0].gamma));
  // Once the probe has seen both streams it should lock onto the argmin.
  for (int t = 20; t < 50; ++t) CHECK(run.transcripts[t].action == 1);
  // Graph-revealed losses: greedy's oracle batch covers all observed actions.
  for (const auto& tr : run.transcripts)
    CHECK(tr.loss_batch.size() == tr.observed.size());
}

TEST_CASE("constant predictions keep greedy pinned to the first action") {
  GenericGraphEnvironment env(
      [](const Vec&) { return Vec::Constant(3, 0.5); },
      [](const Vec&) { return all_ones_model(3); }, 3, 1, 40, 13,
      GenericGraphEnvironment::LossNoise::none);
  const RunResult run = run_learner(env, base_config(Algorithm::greedy));
  for (const auto& tr : run.transcripts) CHECK(tr.action == 0);
}

TEST_CASE("initial exploration parameter") {
  BiddingEnvironment env = make_bidding_env(100, 4, 4);  // K = 5, T = 100

  LearnerConfig ug = base_config(Algorithm::squarecb_ug);
  ug.gamma_scale = 1.5;
  CHECK(run_learner(env, ug).transcripts[0].gamma ==
        doctest::Approx(15.0).epsilon(1e-12));

  LearnerConfig cb = base_config(Algorithm::squarecb);
  CHECK(run_learner(env, cb).transcripts[0].gamma ==
        doctest::Approx(std::sqrt(500.0)).epsilon(1e-12));

  // Doubling mode: gamma_1 = sqrt(T / reg_bound), floored at 4.
  LearnerConfig doubled = base_config(Algorithm::squarecb_ug);
  doubled.doubling = true;
  doubled.reg_bound = 1.0;
  CHECK(run_learner(env, doubled).transcripts[0].gamma ==
        doctest::Approx(10.0).epsilon(1e-12));
  doubled.reg_bound = 0.0;  // defaults to sqrt(T), so sqrt(10) floors to 4
  CHECK(run_learner(env, doubled).transcripts[0].gamma == 4.0);

  LearnerConfig tiny = base_config(Algorithm::squarecb_ug);
  tiny.gamma_scale = 1e-6;
  CHECK(run_learner(env, tiny).transcripts[0].gamma == 4.0);

  LearnerConfig bad = base_config(Algorithm::squarecb_ug);
  bad.gamma_scale = 0.0;
  CHECK_THROWS(Learner(env, bad));
}

TEST_CASE("runs are reproducible and seed-sensitive") {
  BiddingEnvironment env = make_bidding_env(100, 4, 5);
  for (Algorithm alg : {Algorithm::squarecb_ug, Algorithm::squarecb,
                        Algorithm::greedy, Algorithm::trivial}) {
    LearnerConfig cfg = base_config(alg);
    const RunResult a = run_learner(env, cfg);
    const RunResult b = run_learner(env, cfg);
    REQUIRE(a.transcripts.size() == b.transcripts.size());
    for (std::size_t t = 0; t < a.transcripts.size(); ++t)
      CHECK(same_transcript(a.transcripts[t], b.transcripts[t]));
    CHECK(a.ledger.cum_regret() == b.ledger.cum_regret());
  }

  // The solver policy path must be deterministic too.
  LearnerConfig solver = base_config(Algorithm::squarecb_ug);
  solver.policy_mode = PolicyMode::dec_solver;
  const RunResult a = run_learner(env, solver);
  const RunResult b = run_learner(env, solver);
  for (std::size_t t = 0; t < a.transcripts.size(); ++t)
    CHECK(same_transcript(a.transcripts[t], b.transcripts[t]));

  LearnerConfig other = solver;
  other.seed = 8;
  const RunResult c = run_learner(env, other);
  bool any_difference = false;
  for (std::size_t t = 0; t < a.transcripts.size(); ++t)
    if (!same_transcript(a.transcripts[t], c.transcripts[t]))
      any_difference = true;
  CHECK(any_difference);
}

TEST_CASE("play distributions are lawful and honored") {
  BiddingEnvironment env = make_bidding_env(80, 4, 6);
  for (Algorithm alg : {Algorithm::squarecb_ug, Algorithm::squarecb,
                        Algorithm::greedy, Algorithm::trivial}) {
    const RunResult run = run_learner(env, base_config(alg));
    for (const auto& tr : run.transcripts) {
      CHECK(is_distribution(tr.p));
      CHECK(tr.p[tr.action] > 0.0);
    }
  }

  // The closed-form policy is supported on the cheapest bid and the
  // predicted winning bin only.
  const RunResult ug = run_learner(env, base_config(Algorithm::squarecb_ug));
  for (const auto& tr : ug.transcripts) {
    REQUIRE(tr.price_bin >= 0);
    for (int i = 0; i < tr.p.size(); ++i)
      if (i != 0 && i != tr.price_bin) CHECK(tr.p[i] == 0.0);
  }
}

TEST_CASE("sampling matches the distribution in total variation") {
  Vec p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  Rng rng(99);
  const int draws = 100000;
  Vec counts = Vec::Zero(4);
  for (int s = 0; s < draws; ++s) counts[rng.categorical(p)] += 1.0;
  const double tv = 0.5 * (counts / draws - p).cwiseAbs().sum();
  CHECK(tv < 0.01);
}

TEST_CASE("ledger matches the transcripts") {
  BiddingEnvironment env = make_bidding_env(60, 4, 7);
  const RunResult run = run_learner(env, base_config(Algorithm::squarecb_ug));
  double total = 0.0;
  for (const auto& tr : run.transcripts) total += tr.regret_increment;
  CHECK(run.ledger.cum_regret() == doctest::Approx(total).epsilon(1e-12));
  CHECK(run.ledger.rounds() == 60);
}

TEST_CASE("first-round squared excess comes from the zero predictor") {
  // On a noiseless generic environment with an all-ones graph the first
  // round's squared-loss excess is exactly the sum of squared true losses:
  // the linear probe starts at zero and the truth has zero excess.
  Vec means(3);
  means << 0.2, 0.5, 0.8;
  GenericGraphEnvironment env([&](const Vec&) { return means; },
                              [](const Vec&) { return all_ones_model(3); }, 3,
                              2, 1, 17,
                              GenericGraphEnvironment::LossNoise::none);
  LearnerConfig cfg = base_config(Algorithm::squarecb_ug);
  cfg.policy_mode = PolicyMode::dec_solver;
  const RunResult run = run_learner(env, cfg);
  CHECK(run.ledger.cum_sq_excess() ==
        doctest::Approx(means.squaredNorm()).epsilon(1e-12));
  CHECK(run.ledger.cum_log_excess() > 0.0);
}

TEST_CASE("doubling controller replays exactly from the transcripts") {
  BiddingEnvironment env = make_bidding_env(300, 4, 8);
  LearnerConfig cfg = base_config(Algorithm::squarecb_ug);
  cfg.doubling = true;
  const RunResult run = run_learner(env, cfg);

  const double reg_bound = std::sqrt(300.0);
  double gamma = std::max(4.0, std::sqrt(300.0 / reg_bound));
  double budget = 0.0;
  int epoch = 1;
  for (const auto& tr : run.transcripts) {
    CHECK(tr.epoch == epoch);
    CHECK(tr.gamma == doctest::Approx(gamma).epsilon(1e-12));
    budget += tr.dec_value;
    if (budget > gamma * reg_bound) {
      ++epoch;
      gamma *= 2.0;
      budget = 0.0;
    }
  }
  CHECK(run.num_epochs == epoch);
  CHECK(run.num_epochs > 1);  // this horizon is long enough to restart
  CHECK(run.num_epochs <= static_cast<int>(std::log2(300.0)) + 2);
}

TEST_CASE("unreachable budget means a single epoch") {
  BiddingEnvironment env = make_bidding_env(120, 4, 9);
  LearnerConfig cfg = base_config(Algorithm::squarecb_ug);
  cfg.doubling = true;
  cfg.reg_bound = 1e9;
  const RunResult run = run_learner(env, cfg);
  CHECK(run.num_epochs == 1);
  for (const auto& tr : run.transcripts) CHECK(tr.epoch == 1);
}

TEST_CASE("learner refuses to run past the horizon") {
  BiddingEnvironment env = make_bidding_env(5, 2, 10);
  Learner learner(env, base_config(Algorithm::trivial));
  for (int t = 0; t < 5; ++t) learner.step();
  CHECK(learner.done());
  CHECK_THROWS(learner.step());
}
