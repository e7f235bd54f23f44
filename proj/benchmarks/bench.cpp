// Microbenchmarks for the per-round hot path: DEC evaluation/minimization,
// the closed-form bidding policy, graph construction, and oracle updates.

#include "graphband/dec.hpp"
#include "graphband/feedback_graph.hpp"
#include "graphband/oracles.hpp"

#include <benchmark/benchmark.h>

using namespace graphband;

namespace {

DecProblem make_problem(int k, double gamma) {
  Rng rng(90 + k);
  Vec f(k);
  for (int i = 0; i < k; ++i) f[i] = rng.uniform01();
  Mat probs(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      probs(i, j) = (i == j) ? 1.0 : rng.uniform(0.1, 1.0);
  DecProblem prob;
  prob.f = f;
  prob.g = GraphModel(probs);
  prob.gamma = gamma;
  prob.domain = VDomain::clamped;
  return prob;
}

void bm_dec_value(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const DecProblem prob = make_problem(k, 32.0);
  const Vec p = Vec::Constant(k, 1.0 / k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dec_value(prob, p));
  }
}
BENCHMARK(bm_dec_value)->Arg(5)->Arg(25)->Arg(75);

void bm_minimize_dec(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const DecProblem prob = make_problem(k, 32.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize_dec(prob));
  }
}
BENCHMARK(bm_minimize_dec)->Arg(5)->Arg(25)->Arg(75)->Unit(benchmark::kMillisecond);

void bm_closed_form_policy(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  Rng rng(7);
  Vec f(k);
  for (int i = 0; i < k; ++i) f[i] = rng.uniform01();
  for (auto _ : state) {
    benchmark::DoNotOptimize(closed_form_bidding_policy(f, k / 2, 64.0));
  }
}
BENCHMARK(bm_closed_form_policy)->Arg(26)->Arg(76);

void bm_build_bidding_graph(benchmark::State& state) {
  const BidGrid grid = BidGrid::uniform_steps(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_bidding_graph(grid, 0.37));
  }
}
BENCHMARK(bm_build_bidding_graph)->Arg(25)->Arg(75);

void bm_bidding_suite_round(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BidGrid grid = BidGrid::uniform_steps(n);
  BiddingOracleSuite suite(32, grid, 0.02, 0.05, 11);
  Rng rng(12);
  Vec x(32);
  for (int i = 0; i < 32; ++i) x[i] = rng.normal();
  FeedbackBatch batch;
  batch.context = x;
  batch.price_bin = n / 2;
  for (int i = n / 2; i <= n; ++i) batch.losses.push_back({i, 0.4});
  for (int i = 0; i <= n; ++i)
    batch.edges.push_back({n / 2, i, i >= n / 2 ? 1.0 : 0.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(suite.predict(x, rng));
    suite.update(batch);
  }
}
BENCHMARK(bm_bidding_suite_round)->Arg(25)->Arg(75);

}  // namespace

BENCHMARK_MAIN();
