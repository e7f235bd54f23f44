#include <doctest.h>

#include "graphband/common.hpp"
#include "graphband/losses.hpp"

#include <cmath>

using namespace graphband;

TEST_CASE("log loss basics") {
  CHECK(log_loss(0.5, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(log_loss(0.5, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // Perfect confident predictions cost (almost) nothing; the 1e-9 clamp
  // keeps the value finite instead of exactly zero.
  CHECK(log_loss(1.0, 1.0) < 1e-8);
  CHECK(log_loss(0.0, 0.0) < 1e-8);
  // And wrong confident predictions cost a lot, but not infinity.
  CHECK(log_loss(0.0, 1.0) > 20.0);
  CHECK(std::isfinite(log_loss(0.0, 1.0)));

  Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    const double u = rng.uniform01();
    const double b = rng.uniform01();
    CHECK(log_loss(u, b) >= 0.0);
  }
}

TEST_CASE("log loss is proper at binary outcomes") {
  Rng rng(32);
  for (int i = 0; i < 2000; ++i) {
    const double u = rng.uniform01();
    CHECK(log_loss(u, 1.0) >= log_loss(1.0, 1.0));
    CHECK(log_loss(u, 0.0) >= log_loss(0.0, 0.0));
  }
}

TEST_CASE("log loss derivative matches finite differences away from clamps") {
  Rng rng(33);
  const double h = 1e-6;
  for (int i = 0; i < 500; ++i) {
    const double u = rng.uniform(0.05, 0.95);
    const double b = rng.uniform01();
    const double fd = (log_loss(u + h, b) - log_loss(u - h, b)) / (2.0 * h);
    CHECK(log_loss_du(u, b) == doctest::Approx(fd).epsilon(1e-5));
  }
  // Inside the clamp region the loss is flat by construction.
  CHECK(log_loss_du(1.0, 0.0) == 0.0);
  CHECK(log_loss_du(0.0, 1.0) == 0.0);
}

TEST_CASE("triangular discrimination") {
  CHECK(triangular_discrimination(0.0, 0.0) == 0.0);
  CHECK(triangular_discrimination(0.3, 0.3) == 0.0);
  CHECK(triangular_discrimination(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(triangular_discrimination(0.2, 0.6) ==
        doctest::Approx(0.16 / 0.8).epsilon(1e-12));
  // Symmetric in its arguments.
  Rng rng(34);
  for (int i = 0; i < 500; ++i) {
    const double u = rng.uniform01(), g = rng.uniform01();
    CHECK(triangular_discrimination(u, g) ==
          doctest::Approx(triangular_discrimination(g, u)).epsilon(1e-12));
    CHECK(triangular_discrimination(u, g) >= 0.0);
  }
}

TEST_CASE("auction loss values") {
  // Losing bid: no trade, loss 1/2 regardless of the value.
  CHECK(bidding_loss(0.3, 0.4, 0.9) == 0.5);
  // Winning below value: profit shrinks the loss.
  CHECK(bidding_loss(0.5, 0.4, 0.8) == doctest::Approx(0.35).epsilon(1e-12));
  // Winning above value: overpaying is punished beyond the no-trade loss.
  CHECK(bidding_loss(0.9, 0.4, 0.2) == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(bidding_loss(0.5, 0.3, 0.9) == doctest::Approx(0.3).epsilon(1e-12));
  // Boundary: a bid exactly at the competing price wins.
  CHECK(bidding_loss(0.4, 0.4, 0.8) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("auction losses stay in [0, 1] for normalized inputs") {
  Rng rng(35);
  for (int i = 0; i < 5000; ++i) {
    const double a = rng.uniform01();
    const double w = rng.uniform01();
    const double v = rng.uniform01();
    const double l = bidding_loss(a, w, v);
    CHECK(l >= 0.0);
    CHECK(l <= 1.0);
  }
}

TEST_CASE("per-grid loss vector matches the scalar loss") {
  const BidGrid grid = BidGrid::uniform_steps(4);
  const Vec losses = bidding_loss_vector(grid, 0.3, 0.7);
  REQUIRE(losses.size() == 5);
  for (int i = 0; i < 5; ++i)
    CHECK(losses[i] == bidding_loss(grid.bid(i), 0.3, 0.7));
  // Bids 0 and 0.25 lose; 0.5 wins with profit 0.2.
  CHECK(losses[0] == 0.5);
  CHECK(losses[1] == 0.5);
  CHECK(losses[2] == doctest::Approx(0.4).epsilon(1e-12));
}
