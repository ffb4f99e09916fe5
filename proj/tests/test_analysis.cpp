#include <doctest.h>

#include "aggeq/analysis.hpp"
#include "aggeq/reduction.hpp"
#include "aggeq/solver.hpp"
#include "helpers.hpp"

using namespace aggeq;
using namespace testing_support;

namespace {

const BoundCertificate& find(const std::vector<BoundCertificate>& v, BoundKind k) {
  for (const auto& c : v)
    if (c.kind == k) return c;
  throw std::logic_error("missing certificate");
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("VNE to SVWE gap certificates") {
  const auto s = thm1_bounds(1.0, Modulus::strong(2.0), 100.0, 1.0);
  CHECK(find(s, BoundKind::Thm1_individual).value == doctest::Approx(0.05));
  CHECK(find(s, BoundKind::Thm1_mean).value == doctest::Approx(0.005));
  CHECK(find(s, BoundKind::Thm1_aggregate).value == doctest::Approx(0.005));
  for (const auto& c : s) CHECK(c.valid);
  const auto s4 = thm1_bounds(1.0, Modulus::strong(2.0), 400.0, 1.0);
  CHECK(find(s4, BoundKind::Thm1_aggregate).value == doctest::Approx(0.005 / 4));
  const auto b = thm1_bounds(1.0, Modulus::aggregative(2.0), 50.0, 1.0);
  CHECK(find(b, BoundKind::Thm1_aggregate).value == doctest::Approx(std::sqrt(0.02)));
  const auto missing = thm1_bounds(1.0, Modulus::strong(std::nullopt), 50.0, 1.0);
  for (const auto& c : missing) {
    CHECK_FALSE(c.valid);
    CHECK(std::isinf(c.value));
  }
  CHECK_THROWS_AS(thm1_bounds(-1.0, Modulus::strong(2.0), 50.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(thm1_bounds(1.0, Modulus::strong(0.0), 50.0, 1.0), std::invalid_argument);
}

TEST_CASE("reduction certificates") {
  for (const auto& c : thm2_bounds(0.0, Modulus::strong(2.0), 100.0)) CHECK(c.value == 0.0);
  const auto s = thm2_bounds(2.5, Modulus::strong(2.0), 100.0);
  CHECK(find(s, BoundKind::Thm2_individual).value == doctest::Approx(std::sqrt(125.0)));
  CHECK(find(s, BoundKind::Thm2_aggregate_strong).value == doctest::Approx(std::sqrt(1.25)));
  CHECK(find(s, BoundKind::Thm2_mean).value == doctest::Approx(std::sqrt(1.25)));
  const auto big = thm2_bounds(2.5, Modulus::strong(2.0), 400.0);
  CHECK(find(big, BoundKind::Thm2_individual).value == doctest::Approx(2.0 * std::sqrt(125.0)));
  CHECK(find(big, BoundKind::Thm2_aggregate_strong).value == doctest::Approx(std::sqrt(1.25)));
  const auto a = thm2_bounds(2.0, Modulus::aggregative(0.5), 10.0);
  CHECK(find(a, BoundKind::Thm2_aggregate_aggr).value == doctest::Approx(2.0));
  CHECK_THROWS_AS(thm2_bounds(-1.0, Modulus::strong(2.0), 10.0), std::invalid_argument);
}

TEST_CASE("reduced SVWE to VNE certificates") {
  const BoundCertificate c = corollary_bounds(1.0, Modulus::strong(2.0), 100.0, 2.5, 1.0);
  const double t1 = find(thm1_bounds(1.0, Modulus::strong(2.0), 100.0, 1.0), BoundKind::Thm1_aggregate).value;
  const double t2 = find(thm2_bounds(2.5, Modulus::strong(2.0), 100.0), BoundKind::Thm2_aggregate_strong).value;
  CHECK(c.kind == BoundKind::Corollary_aggregate);
  CHECK(c.value == doctest::Approx(t1 + t2));
  CHECK(corollary_bounds(1.0, Modulus::strong(2.0), 1e12, 0.0, 1.0).value < 1e-11);
  const BoundCertificate tc = corollary_bounds(1.0, Modulus::aggregative(2.0), 50.0, 0.5, 3.0, 4.0, 2.0);
  CHECK(tc.value == doctest::Approx(3.0 * std::sqrt(2.0 * 4.0 * 2.0 / (50.0 * 2.0)) + 0.5));
  CHECK(tc.inputs.T == 4.0);
  CHECK(tc.inputs.C == 2.0);
  const BoundCertificate fb = corollary_bounds(1.0, Modulus::aggregative(2.0), 50.0, 0.5, 1.0);
  CHECK(fb.value == doctest::Approx(std::sqrt(0.02) + 0.5));
  CHECK_FALSE(fb.note.empty());
}

TEST_CASE("similarity bound") {
  CHECK(prop3_bound(1.0, 1.0, 1.0, 0.0, 0.0, 1.0) == 0.0);
  CHECK(prop3_bound(1.0, 1.0, 1.0, 0.5, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(prop3_bound(1.0, 1.0, 1.0, 0.5, 0.3, 2.0) > prop3_bound(1.0, 1.0, 1.0, 0.5, 0.3, 1.0));
  CHECK_THROWS_AS(prop3_bound(0.0, 1.0, 1.0, 0.5, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("relative aggregate error") {
  const Vector ref{1.0, 2.0, 3.0};
  CHECK(relative_aggregate_error(ref, ref) == 0.0);
  CHECK(relative_aggregate_error(ref, Vector{1.02, 2.04, 3.06}) == doctest::Approx(0.02));
  CHECK_THROWS_AS(relative_aggregate_error(Vector{0.0, 0.0}, Vector{1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(relative_aggregate_error(ref, Vector{1.0}), std::invalid_argument);
}

TEST_CASE("rate fit") {
  const Vector xs{5, 10, 20, 50, 100};
  Vector ys;
  for (double x : xs) ys.push_back(1.0 / x);
  const RateFit f = fit_rate(xs, ys);
  CHECK(f.a == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  const RateFit c = fit_rate(xs, Vector(5, 0.3));
  CHECK(c.a == doctest::Approx(0.0).scale(1.0));
  for (double& y : ys) y = 0.2 * std::pow(y, 0.37);
  CHECK(fit_rate(xs, ys).a == doctest::Approx(0.37));
  CHECK_THROWS_AS(fit_rate(Vector{1, 2}, Vector{1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(fit_rate(Vector{1, 2, 3}, Vector{1, 0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(fit_rate(Vector{2, 2, 2}, Vector{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("rank correlation") {
  CHECK(spearman(Vector{1, 2, 3, 4}, Vector{10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman(Vector{1, 2, 3, 4}, Vector{4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman(Vector{1, 2, 3, 4, 5}, Vector{1, 2, 4, 3, 5}) == doctest::Approx(0.9));
  CHECK(spearman(Vector{1, 2, 3}, Vector{1, 1, 2}) == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("certificates bound measured gaps on replicated games") {
  // c(xbar) = 1 + xbar, omega = 1, y = 1 on [0, 2]: the SVWE is 1/3 and the
  // VNE is N / (3N + 1), a gap of 1 / (3 (3N + 1)) in average units
  SolverConfig cfg;
  cfg.stop_tol = 1e-8;
  cfg.max_iters = 2000000;
  double previous = 0.0;
  for (std::size_t n : {10u, 20u, 40u, 80u}) {
    const GameSpec g = replicated_box_game(n, 1.0, 1.0, 1.0, 0.0, 2.0, AggregationConvention::Average, 1.0);
    const EquilibriumResult w = solve_svwe(g, cfg), v = solve_vne(g, cfg);
    REQUIRE(w.converged);
    REQUIRE(v.converged);
    const double gap = std::abs(w.aggregate[0] - v.aggregate[0]);
    const double nd = static_cast<double>(n);
    CHECK(gap == doctest::Approx(1.0 / (3.0 * (3.0 * nd + 1.0))).epsilon(1e-4));
    const GameConstants c = compute_constants(g);
    const MonotonicityReport m = classify_monotonicity(g);
    const auto bounds = thm1_bounds(c.L2_estimate, Modulus::strong(m.alpha), nd, c.R);
    CHECK(gap <= find(bounds, BoundKind::Thm1_aggregate).value + 10 * cfg.stop_tol);
    const double indiv = std::abs(w.profile(0, 0) - v.profile(0, 0));
    CHECK(indiv <= find(bounds, BoundKind::Thm1_individual).value + 10 * cfg.stop_tol);
    if (previous > 0.0) CHECK(gap <= 0.75 * previous + 10 * cfg.stop_tol);
    previous = gap;
  }
}

}  // TEST_SUITE
