#include "acthull/errors.hpp"
#include "acthull/geometry.hpp"
#include "acthull/projection.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace acthull;
using testing_support::pts;
using testing_support::vec;

namespace {

const PointSet& triangle() {
  static const PointSet t = pts({{0, 0}, {1, 0}, {0, 1}});
  return t;
}

void check_contract(const ProjectionResult& r, const PointSet& c, const Vector& v, const SolverConfig& cfg) {
  CHECK(r.weights.feasible(1e-9));
  Vector x = Vector::Zero(v.size());
  for (Index i = 0; i < c.size(); ++i) x += r.weights.alpha(static_cast<Eigen::Index>(i)) * c.row(i);
  const double recomputed = (v - x).norm();
  CHECK(std::abs(recomputed - r.distance) <= 1e-7 * std::max(1.0, recomputed));
  CHECK(r.solver_gap <= cfg.gap_tol);
}

}  // namespace

TEST_CASE("triangle cases") {
  const SolverConfig cfg;
  SUBCASE("interior point has its barycentric weights") {
    const auto r = hull_distance(vec({0.25, 0.25}), triangle(), cfg);
    CHECK(r.distance <= 1e-7);
    CHECK(r.weights.alpha(0) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(r.weights.alpha(1) == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(r.weights.alpha(2) == doctest::Approx(0.25).epsilon(1e-7));
    check_contract(r, triangle(), vec({0.25, 0.25}), cfg);
  }
  SUBCASE("nearest vertex") {
    const auto r = hull_distance(vec({2, 0}), triangle(), cfg);
    CHECK(std::abs(r.distance - 1.0) <= 1e-7);
    CHECK(std::abs(r.nearest_point(0) - 1.0) <= 1e-7);
    CHECK(std::abs(r.nearest_point(1)) <= 1e-7);
    CHECK(std::abs(r.weights.alpha(1) - 1.0) <= 1e-7);
  }
  SUBCASE("nearest edge") {
    const auto r = hull_distance(vec({1, 1}), triangle(), cfg);
    CHECK(std::abs(r.distance - std::sqrt(0.5)) <= 1e-7);
    CHECK(std::abs(r.nearest_point(0) - 0.5) <= 1e-7);
    CHECK(std::abs(r.nearest_point(1) - 0.5) <= 1e-7);
  }
  SUBCASE("members project to themselves") {
    for (Index i = 0; i < 3; ++i) {
      const auto r = hull_distance(triangle().row(i), triangle(), cfg);
      CHECK(r.distance <= 1e-12);
      CHECK(r.weights.alpha(static_cast<Eigen::Index>(i)) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("is_inside") {
  CHECK(is_inside(vec({1.0 / 3, 1.0 / 3}), triangle()));
  CHECK_FALSE(is_inside(vec({2, 0}), triangle()));
  CHECK(is_inside(vec({0, 1}), triangle()));
  const auto tet = pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(is_inside(vec({0.25, 0.25, 0.25}), tet));
  CHECK_FALSE(is_inside(vec({0.5, 0.5, 0.5}), tet));
}

TEST_CASE("degenerate candidate sets") {
  const auto one = pts({{1, 2, 3}});
  const auto r = hull_distance(vec({1, 2, 5}), one);
  CHECK(r.distance == doctest::Approx(2.0));
  CHECK(r.weights.alpha(0) == 1.0);

  const auto dup = pts({{0, 0}, {0, 0}, {1, 0}, {1, 0}});
  const auto r2 = hull_distance(vec({0.5, 1}), dup);
  CHECK(r2.distance == doctest::Approx(1.0));
  CHECK(r2.weights.feasible());
}

TEST_CASE("input errors") {
  CHECK_THROWS_AS(hull_distance(vec({1, 2, 3}), triangle()), InputError);
  CHECK_THROWS_AS(hull_distance(vec({1, std::nan("")}), triangle()), InputError);
  SolverConfig bad;
  bad.gap_tol = 1.5;
  CHECK_THROWS_AS(hull_distance(vec({1, 1}), triangle(), bad), InputError);
  bad = {};
  bad.zero_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("iteration cap raises with the best iterate") {
  const auto cloud = testing_support::gaussian(300, 40, 21);
  SolverConfig cfg;
  cfg.max_iters = 2;
  Vector v = Vector::Zero(40);
  try {
    hull_distance(v, cloud, cfg);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best().weights.feasible());
    CHECK(e.best().distance >= 0.0);
  }
}

TEST_CASE("property: agrees with dense grid search over the simplex") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const Index m = 1 + rng.index(5);
    const Index d = 1 + rng.index(3);
    std::vector<std::vector<double>> rows(m, std::vector<double>(d));
    oracle::Pts x;
    for (auto& r : rows) {
      for (auto& e : r) e = rng.uniform(-1, 1);
      x.push_back(Eigen::Map<Vector>(r.data(), static_cast<Eigen::Index>(d)));
    }
    Vector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = rng.uniform(-1.5, 1.5);
    const auto c = pts(rows);
    const auto r = hull_distance(v, c);
    const double grid = oracle::grid_distance(x, v, 1e-3);
    CHECK(std::abs(r.distance - grid) <= 2e-3);
    CHECK(r.distance <= grid + 1e-9);
    check_contract(r, c, v, SolverConfig{});
  }
}

TEST_CASE("property: convex combinations of members are inside") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = 2 + rng.index(30);
    const Index d = 1 + rng.index(20);
    const auto c = testing_support::gaussian(m, d, 100 + static_cast<std::uint64_t>(trial));
    Vector beta(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < beta.size(); ++i) beta(i) = -std::log(1.0 - rng.uniform());
    beta /= beta.sum();
    const Vector v = c.matrix().transpose() * beta;
    const auto r = hull_distance(v, c);
    CHECK(r.distance <= SolverConfig{}.zero_tol * diameter(c).value);
  }
}

TEST_CASE("property: adding a candidate never increases the distance") {
  Rng rng(8);
  for (int trial = 0; trial < 80; ++trial) {
    const Index d = 1 + rng.index(10);
    const Index m = 1 + rng.index(25);
    const auto all = testing_support::gaussian(m + 1, d, 500 + static_cast<std::uint64_t>(trial));
    Vector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = 2.0 * rng.normal();
    std::vector<Index> first(m);
    std::iota(first.begin(), first.end(), Index{0});
    const double before = hull_distance(v, all.subset(first)).distance;
    const double after = hull_distance(v, all).distance;
    CHECK(after <= before + 1e-9 * std::max(1.0, before));
  }
}

TEST_CASE("property: isometry invariance") {
  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 2 + rng.index(12);
    const Index m = 2 + rng.index(40);
    const auto c = testing_support::gaussian(m, d, 900 + static_cast<std::uint64_t>(trial));
    Vector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = 2.5 * rng.normal();
    const auto q = testing_support::random_rotation(d, 77 + static_cast<std::uint64_t>(trial));
    Vector t(static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < t.size(); ++j) t(j) = 10.0 * rng.normal();
    const double a = hull_distance(v, c).distance;
    const double b = hull_distance(q * v + t, testing_support::transform(c, q, t)).distance;
    CHECK(std::abs(a - b) <= 1e-6 * std::max(a, 1.0));
  }
}

TEST_CASE("warm start reaches the same answer") {
  const auto c = testing_support::gaussian(80, 12, 31);
  Vector v = Vector::Constant(12, 1.7);
  const auto cold = hull_distance(v, c);
  std::vector<double> warm(cold.weights.alpha.data(), cold.weights.alpha.data() + cold.weights.alpha.size());
  const auto hot = hull_distance(v, c, {}, warm);
  CHECK(hot.distance == doctest::Approx(cold.distance).epsilon(1e-8));
  CHECK(hot.iterations <= cold.iterations);
  // A poor hint is only a hint.
  std::vector<double> uniform(80, 1.0 / 80);
  CHECK(hull_distance(v, c, {}, uniform).distance == doctest::Approx(cold.distance).epsilon(1e-8));
}

TEST_CASE("determinism") {
  const auto c = testing_support::gaussian(60, 9, 44);
  const Vector v = Vector::Constant(9, 0.3);
  const auto a = hull_distance(v, c);
  const auto b = hull_distance(v, c);
  CHECK(a.distance == b.distance);
  CHECK(a.weights.alpha == b.weights.alpha);
  CHECK(a.iterations == b.iterations);
}
