#include <doctest.h>

#include "aggeq/coupled_slack.hpp"
#include "aggeq/lp.hpp"
#include "helpers.hpp"

using namespace aggeq;
using namespace testing_support;

TEST_SUITE("lp") {

TEST_CASE("textbook maximisation") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
  LinearProgram lp{Matrix{{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {RowSense::LessEqual, RowSense::LessEqual, RowSense::LessEqual}, {3, 5}};
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(36.0));
  CHECK(s.x[0] == doctest::Approx(2.0));
  CHECK(s.x[1] == doctest::Approx(6.0));
  // strong duality
  CHECK(s.duals[0] * 4 + s.duals[1] * 12 + s.duals[2] * 18 == doctest::Approx(36.0));
  for (double y : s.duals) CHECK(y >= -1e-12);
}

TEST_CASE("equality and greater-equal rows") {
  // max -x - y, x + y = 2, x >= 0.5 -> objective -2
  LinearProgram lp{Matrix{{1, 1}, {1, 0}}, {2, 0.5}, {RowSense::Equal, RowSense::GreaterEqual}, {-1, -1}};
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-2.0));
  CHECK(s.x[0] >= 0.5 - 1e-12);
}

TEST_CASE("infeasible and unbounded") {
  LinearProgram inf{Matrix{{1}, {1}}, {1, 2}, {RowSense::LessEqual, RowSense::GreaterEqual}, {1}};
  CHECK(solve_lp(inf).status == LpStatus::Infeasible);
  LinearProgram unb{Matrix{{1, -1}}, {1}, {RowSense::LessEqual}, {1, 0}};
  CHECK(solve_lp(unb).status == LpStatus::Unbounded);
}

TEST_CASE("degenerate problems terminate") {
  // Klee-Minty style cube with repeated degenerate vertices
  const std::size_t n = 6;
  LinearProgram lp;
  lp.a = Matrix(n, n);
  lp.b.assign(n, 0.0);
  lp.c.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) lp.a(i, j) = 2.0 * std::pow(10.0, static_cast<double>(i - j));
    lp.a(i, i) = 1.0;
    lp.b[i] = std::pow(100.0, static_cast<double>(i));
    lp.c[i] = std::pow(10.0, static_cast<double>(n - 1 - i));
    lp.sense.push_back(RowSense::LessEqual);
  }
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(std::pow(100.0, static_cast<double>(n - 1))));

  LinearProgram degen{Matrix{{1, 1}, {1, 1}, {1, 0}}, {1, 1, 0}, {RowSense::LessEqual, RowSense::LessEqual, RowSense::LessEqual}, {1, 1}};
  const LpSolution d = solve_lp(degen);
  REQUIRE(d.status == LpStatus::Optimal);
  CHECK(d.objective == doctest::Approx(1.0));
}

TEST_CASE("random feasible problems satisfy the optimality conditions") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform_int(0, 4));
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 4));
    LinearProgram lp;
    lp.a = Matrix(m, n);
    for (double& v : lp.a.data()) v = rng.uniform(0.1, 2.0);
    lp.b.resize(m);
    for (double& v : lp.b) v = rng.uniform(1.0, 5.0);
    lp.sense.assign(m, RowSense::LessEqual);
    lp.c.resize(n);
    for (double& v : lp.c) v = rng.uniform(-1.0, 2.0);
    const LpSolution s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    double by = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(dot(lp.a.row(i), s.x) <= lp.b[i] + 1e-9);
      by += s.duals[i] * lp.b[i];
    }
    CHECK(by == doctest::Approx(s.objective).epsilon(1e-9));
    // dual feasibility: A^T y >= c
    for (std::size_t j = 0; j < n; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < m; ++i) col += lp.a(i, j) * s.duals[i];
      CHECK(col >= lp.c[j] - 1e-9);
    }
  }
}

}  // TEST_SUITE

TEST_SUITE("coupled slack") {

GameSpec budgeted_t3_game(Rng& rng, std::size_t n_players) {
  std::vector<PlayerParams> players;
  for (std::size_t n = 0; n < n_players; ++n) {
    const BoxSimplexSet s = random_set(rng, 3);
    PlayerParams p;
    p.omega = 1.0;
    p.preferred = {0.0, 0.0, 0.0};
    p.energy = s.energy;
    p.lower = s.lower;
    p.upper = s.upper;
    players.push_back(p);
  }
  return make_game(players, {PriceFunction::affine(1.0, 0.1)});
}

TEST_CASE("matches the load-set grid oracle at T = 3") {
  Rng rng(31);
  int compared = 0;
  for (int trial = 0; trial < 12; ++trial) {
    GameSpec g = budgeted_t3_game(rng, 2 + static_cast<std::size_t>(trial % 3));
    if (trial % 2 == 1) g.weights.assign(g.n_players(), 2.5);
    if (trial % 4 == 3) g.convention = AggregationConvention::Average;
    double upper_sum = 0.0;
    for (const auto& p : g.players) upper_sum += p.upper[0] + p.upper[1] + p.upper[2];
    // ramp-like rows and a capacity
    const double cap = 0.45 * upper_sum * (g.convention == AggregationConvention::Sum ? g.weight(0) : 1.0 / g.n_players());
    g.coupling = CouplingConstraint{Matrix{{-1, 0, 1}, {1, 0, -1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                                    {0.3, 0.3, cap, cap, cap}};
    const CoupledSlack cs = max_coupled_slack(g);

    std::vector<oracle::Set> sets;
    oracle::Vec scales;
    for (std::size_t n = 0; n < g.n_players(); ++n) {
      sets.push_back(to_oracle(g.players[n].action_set()));
      scales.push_back(g.aggregate_scale(n));
    }
    std::vector<oracle::Vec> rows;
    for (std::size_t j = 0; j < g.coupling->rows(); ++j)
      rows.emplace_back(g.coupling->matrix.row(j).begin(), g.coupling->matrix.row(j).end());
    const double ref = oracle::coupled_slack_grid_t3(sets, scales, rows, g.coupling->rhs);
    CHECK(cs.slack == doctest::Approx(ref).epsilon(1e-6).scale(1e-6));
    CHECK(cs.feasible == (ref >= 0.0));
    if (cs.feasible) {
      CHECK(cs.aggregate.size() == 3);
      for (std::size_t j = 0; j < g.coupling->rows(); ++j)
        CHECK(dot(g.coupling->matrix.row(j), cs.aggregate) + cs.slack * norm2(g.coupling->matrix.row(j)) <=
              g.coupling->rhs[j] + 1e-7);
    }
    ++compared;
  }
  CHECK(compared == 12);
}

TEST_CASE("infeasible coupling gives a negative slack") {
  GameSpec g = replicated_box_game(3, 1.0, 1.0, 0.5, 1.0, 2.0, AggregationConvention::Sum);
  g.coupling = CouplingConstraint{Matrix{{1.0}}, {2.0}};
  const CoupledSlack cs = max_coupled_slack(g);
  CHECK_FALSE(cs.feasible);
  CHECK(cs.slack == doctest::Approx(-1.0));
}

TEST_CASE("no coupling rows") {
  GameSpec g = two_player_game();
  CHECK(max_coupled_slack(g).unconstrained);
  g.coupling = CouplingConstraint{Matrix(0, 1), {}};
  CHECK(max_coupled_slack(g).unconstrained);
}

TEST_CASE("one-period box game in closed form") {
  // load range [0, 4], X <= 3: best slack 3 at X = 0
  GameSpec g = replicated_box_game(4, 1.0, 1.0, 0.5, 0.0, 1.0, AggregationConvention::Sum);
  g.coupling = CouplingConstraint{Matrix{{1.0}}, {3.0}};
  CHECK(max_coupled_slack(g).slack == doctest::Approx(3.0));
  // X <= 3 and -X <= -1: slack 1 at X = 2
  g.coupling = CouplingConstraint{Matrix{{1.0}, {-1.0}}, {3.0, -1.0}};
  const CoupledSlack cs = max_coupled_slack(g);
  CHECK(cs.slack == doctest::Approx(1.0));
  CHECK(cs.aggregate[0] == doctest::Approx(2.0));
}

}  // TEST_SUITE
