#pragma once

#include "graphband/common.hpp"
#include "graphband/dec.hpp"
#include "graphband/environments.hpp"
#include "graphband/oracles.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace graphband {

struct LearnerConfig {
  Algorithm algorithm = Algorithm::squarecb_ug;
  double gamma_scale = 1.0;
  FeedbackMode feedback_mode = FeedbackMode::partial;
  PolicyMode policy_mode = PolicyMode::closed_form_bidding;
  bool doubling = false;
  double reg_bound = 0.0;  // <= 0 means sqrt(T)
  double loss_lr = 0.01;
  double graph_lr = 0.05;
  std::uint64_t seed = 0;
  bool record_batches = false;  // keep oracle batches in transcripts (tests)
  int solver_max_iters = 2000;
};

// Everything observable about one round of the protocol.
struct RoundTranscript {
  int round = 0;
  int action = 0;
  double bid = 0.0;  // NaN outside bidding environments
  Vec p;
  std::vector<LossObservation> observed;
  double regret_increment = 0.0;
  double dec_value = 0.0;  // NaN for greedy/trivial
  int epoch = 1;
  double gamma = 0.0;  // NaN for greedy/trivial
  int price_bin = -1;
  bool value_observed = true;
  std::vector<LossObservation> loss_batch;   // only when record_batches
  std::vector<EdgeObservation> edge_batch;   // only when record_batches
};

struct RunResult {
  std::vector<RoundTranscript> transcripts;
  int num_epochs = 1;
  RegretLedger ledger;
};

// Sequential learner over an environment.  Owns the oracles, the exploration
// parameter schedule, and the run RNG; step() executes exactly one round.
class Learner {
 public:
  Learner(Environment& env, LearnerConfig config);

  bool done() const { return t_ >= env_.horizon(); }
  RoundTranscript step();

  double gamma() const { return gamma_; }
  int epoch() const { return epoch_; }
  const RegretLedger& ledger() const { return ledger_; }
  OracleSuite* oracles() { return suite_.get(); }

 private:
  Vec choose_distribution(const RoundEstimates& est, double* dec_out);

  Environment& env_;
  LearnerConfig cfg_;
  std::unique_ptr<OracleSuite> suite_;
  Rng rng_;
  const BidGrid* grid_ = nullptr;  // set when env_ is a BiddingEnvironment
  std::uint64_t oracle_seed_ = 0;
  int t_ = 0;
  int epoch_ = 1;
  double gamma_ = 4.0;
  double reg_bound_ = 0.0;
  double dec_sum_ = 0.0;  // running DEC mass within the current epoch
  RegretLedger ledger_;
};

// Run the full horizon and collect transcripts.
RunResult run_learner(Environment& env, const LearnerConfig& config);

}  // namespace graphband
