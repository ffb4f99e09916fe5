#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "helpers.hpp"

using namespace aggeq;
using namespace testing_support;

namespace {

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_SUITE("projection") {

TEST_CASE("matches the active-set oracle on random instances") {
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t T = 1 + static_cast<std::size_t>(rng.uniform_int(0, 5));
    BoxSimplexSet s = random_set(rng, T);
    if (trial % 7 == 0) s.energy.reset();
    Vector v(T);
    for (double& x : v) x = rng.uniform(-3.0, 5.0);
    const Vector got = project_box_simplex(s, v);
    const oracle::Vec want = oracle::qp_project(to_oracle(s), v);
    worst = std::max(worst, max_abs_diff(got, want));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("projection examples") {
  const BoxSimplexSet s{1.0, {0.0, 0.0}, {1.0, 1.0}};
  const Vector p = project_box_simplex(s, Vector{0.9, 0.9});
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
  const Vector q = project_box_simplex(s, Vector{3.0, -1.0});
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(q[1] == doctest::Approx(0.0));

  // energy at the lower or upper sum pins every coordinate
  const BoxSimplexSet lo{1.0, {0.5, 0.5}, {1.0, 2.0}};
  const Vector r = project_box_simplex(lo, Vector{9.0, -9.0});
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r[1] == doctest::Approx(0.5));
  const BoxSimplexSet hi{3.0, {0.5, 0.5}, {1.0, 2.0}};
  const Vector h = project_box_simplex(hi, Vector{-9.0, -9.0});
  CHECK(h[0] == doctest::Approx(1.0));
  CHECK(h[1] == doctest::Approx(2.0));

  const BoxSimplexSet box{std::nullopt, {0.0, 1.0}, {2.0, 3.0}};
  const Vector b = project_box_simplex(box, Vector{-1.0, 5.0});
  CHECK(b == Vector{0.0, 3.0});
}

TEST_CASE("infeasible sets are rejected") {
  CHECK_THROWS_AS(project_box_simplex(BoxSimplexSet{5.0, {0.0, 0.0}, {1.0, 1.0}}, Vector{0.0, 0.0}),
                  InfeasibleSetError);
  CHECK_THROWS_AS(project_box_simplex(BoxSimplexSet{0.5, {1.0}, {0.0}}, Vector{0.0}), InfeasibleSetError);
  CHECK_THROWS_AS(project_box_simplex(BoxSimplexSet{1.0, {0.0}, {2.0}}, Vector{0.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("projection properties") {
  Rng rng(7);
  ProjectionWorkspace ws;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t T = 1 + static_cast<std::size_t>(rng.uniform_int(0, 23));
    const BoxSimplexSet s = random_set(rng, T);
    Vector v(T), w(T);
    for (std::size_t t = 0; t < T; ++t) {
      v[t] = rng.uniform(-4.0, 4.0);
      w[t] = rng.uniform(-4.0, 4.0);
    }
    const Vector p = project_box_simplex(s, v);
    CHECK(s.contains(p, 1e-9));
    // idempotent
    CHECK(max_abs_diff(project_box_simplex(s, p), p) <= 1e-10);
    // nonexpansive
    const Vector q = project_box_simplex(s, w);
    CHECK(distance(p, q) <= distance(v, w) + 1e-10);
    // obtuse-angle characterisation against a random feasible point
    const Vector z = support_point(s, w);
    double inner = 0.0;
    for (std::size_t t = 0; t < T; ++t) inner += (v[t] - p[t]) * (z[t] - p[t]);
    CHECK(inner <= 1e-9);
    // in-place call agrees with the allocating one
    Vector inplace = v;
    project_box_simplex(s, inplace, inplace, ws);
    CHECK(max_abs_diff(inplace, p) == 0.0);
  }
}

TEST_CASE("support function matches vertex enumeration") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t T = 1 + static_cast<std::size_t>(rng.uniform_int(0, 4));
    BoxSimplexSet s = random_set(rng, T);
    if (trial % 5 == 0) s.energy.reset();
    Vector d(T);
    for (double& x : d) x = rng.normal();
    const Vector x = support_point(s, d);
    CHECK(s.contains(x, 1e-9));
    CHECK(support_function(s, d) == doctest::Approx(oracle::support_by_vertices(to_oracle(s), d)).epsilon(1e-10));
  }
}

TEST_CASE("support function is positively homogeneous and subadditive") {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t T = 2 + static_cast<std::size_t>(rng.uniform_int(0, 6));
    const BoxSimplexSet s = random_set(rng, T);
    Vector a(T), b(T), ab(T), a3(T);
    for (std::size_t t = 0; t < T; ++t) {
      a[t] = rng.normal();
      b[t] = rng.normal();
      ab[t] = a[t] + b[t];
      a3[t] = 3.0 * a[t];
    }
    CHECK(support_function(s, a3) == doctest::Approx(3.0 * support_function(s, a)));
    CHECK(support_function(s, ab) <= support_function(s, a) + support_function(s, b) + 1e-10);
  }
}

TEST_CASE("direction sampling") {
  const Matrix d = sample_directions(5, 40, 3);
  for (std::size_t k = 0; k < d.rows(); ++k) CHECK(norm2(d.row(k)) == doctest::Approx(1.0));
  const Matrix prefix = sample_directions(5, 10, 3);
  for (std::size_t k = 0; k < prefix.rows(); ++k) CHECK(max_abs_diff(prefix.row(k), d.row(k)) == 0.0);
  CHECK(sample_directions(5, 10, 4).data() != prefix.data());
}

TEST_CASE("Hausdorff estimate") {
  Rng rng(10);
  const BoxSimplexSet a{1.0, {0.0, 0.0}, {1.0, 1.0}};
  CHECK(hausdorff_estimate(a, a, 64, 0) == 0.0);
  // a translated segment: both support gaps equal the shift length along the
  // directions that see it
  const BoxSimplexSet b{1.0, {0.0, 0.0}, {1.0, 1.0}};
  const BoxSimplexSet c{1.2, {0.1, 0.1}, {1.1, 1.1}};
  const double h = hausdorff_estimate(b, c, 4096, 1);
  CHECK(h <= std::sqrt(0.02) + 1e-12);
  CHECK(h >= 0.99 * std::sqrt(0.02));
  CHECK_THROWS_AS(hausdorff_estimate(a, a, 0, 0), std::invalid_argument);

  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t T = 2 + static_cast<std::size_t>(rng.uniform_int(0, 1));
    const BoxSimplexSet s1 = random_set(rng, T), s2 = random_set(rng, T);
    const double est = hausdorff_estimate(s1, s2, 2048, 5);
    const double ref = oracle::hausdorff_points(oracle::grid_points(to_oracle(s1), 0.01),
                                                oracle::grid_points(to_oracle(s2), 0.01));
    // sampled directions give a lower bound; the grid is within 0.01 T
    CHECK(est <= ref + 0.01 * static_cast<double>(T) + 1e-9);
    CHECK(est >= 0.95 * ref - 0.02);
    // symmetric
    CHECK(hausdorff_estimate(s2, s1, 2048, 5) == doctest::Approx(est));
  }
}

TEST_CASE("inradius in closed form") {
  CHECK(inradius(BoxSimplexSet{std::nullopt, {0.0, 0.0}, {2.0, 4.0}}).radius == doctest::Approx(1.0));
  // a segment of length sqrt(2) in the plane: inradius sqrt(2) / 2
  CHECK(inradius(BoxSimplexSet{1.0, {0.0, 0.0}, {1.0, 1.0}}).radius == doctest::Approx(std::sqrt(0.5)));
  const Inradius single = inradius(BoxSimplexSet{1.0, {0.0, 1.0}, {2.0, 1.0}});
  CHECK(single.degenerate);
  CHECK(single.radius == 0.0);
  const Inradius pinned = inradius(BoxSimplexSet{2.0, {0.0, 0.0}, {1.0, 1.0}});
  CHECK(pinned.radius == doctest::Approx(0.0));

  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t T = 2 + static_cast<std::size_t>(rng.uniform_int(0, 1));
    const BoxSimplexSet s = random_set(rng, T);
    const double step = T == 2 ? 0.002 : 0.02;
    const double ref = oracle::inradius_grid(to_oracle(s), step);
    // the grid can miss the centre by one step but never overshoots it
    const double r = inradius(s).radius;
    CHECK(ref <= r + step / 4.0);
    CHECK(r <= ref + step);
  }
}

TEST_CASE("norm bound dominates every vertex") {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t T = 1 + static_cast<std::size_t>(rng.uniform_int(0, 5));
    BoxSimplexSet s = random_set(rng, T);
    if (trial % 4 == 0) s.energy.reset();
    CHECK(norm_bound(s) >= oracle::max_norm_by_vertices(to_oracle(s)) - 1e-12);
    CHECK(sum(s.lower) >= 0.0);
  }
}

}  // TEST_SUITE
