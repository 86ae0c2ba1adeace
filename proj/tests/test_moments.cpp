#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "volsos/moments.hpp"
#include "volsos/rng.hpp"

using namespace volsos;

namespace {
constexpr double kPi = std::numbers::pi;

// Rejection-sampling estimate of a moment of the unit lp ball.
struct McMoment {
  double value, std_error;
};

McMoment mc_lp_moment(int n, int p, const MultiIndex& k, long samples, uint64_t seed) {
  CounterRng rng(seed);
  double sum = 0.0, sum2 = 0.0;
  std::vector<double> x(n);
  for (long s = 0; s < samples; ++s) {
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = 2.0 * rng.next_double() - 1.0;
      norm += std::pow(std::abs(x[i]), p);
    }
    double v = 0.0;
    if (norm <= 1.0) {
      v = 1.0;
      for (int i = 0; i < n; ++i) {
        for (int e = 0; e < k[i]; ++e) v *= x[i];
      }
    }
    sum += v;
    sum2 += v * v;
  }
  const double box = std::pow(2.0, n);
  const double mean = sum / samples;
  const double var = std::max(sum2 / samples - mean * mean, 0.0);
  return {mean * box, std::sqrt(var / samples) * box};
}
}  // namespace

TEST_CASE("gamma reference values") {
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
  CHECK(gamma_fn(2.0) == doctest::Approx(1.0).epsilon(1e-13));
  // frozen from a high-precision evaluation
  CHECK(gamma_fn(0.25) == doctest::Approx(3.6256099082219083).epsilon(1e-13));
  CHECK(log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-13));
  CHECK_THROWS_AS(log_gamma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_fn(-1.0), std::invalid_argument);
}

TEST_CASE("box moments") {
  const auto box2 = BoundingSet::box({-1.0, -1.0}, {1.0, 1.0});
  const auto m = box_moments(box2, 3);
  CHECK(m.values[m.basis.lookup({2, 0})] == doctest::Approx(4.0 / 3));
  CHECK(m.values[m.basis.lookup({1, 0})] == 0.0);

  const auto box1 = BoundingSet::box({0.0}, {1.0});
  const auto m1 = box_moments(box1, 3);
  CHECK(m1.values[m1.basis.lookup({3})] == doctest::Approx(0.25));

  CHECK_THROWS_AS(BoundingSet::box({1.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("lp ball moments, closed form") {
  const auto disk = lp_ball_moments(2, 2, 4);
  CHECK(disk.values[disk.basis.lookup({0, 0})] == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(disk.values[disk.basis.lookup({1, 0})] == 0.0);  // bit-exact

  const auto b42 = lp_ball_moments(2, 4, 2);
  const double g14 = gamma_fn(0.25);
  CHECK(b42.values[0] == doctest::Approx(g14 * g14 / (2.0 * std::sqrt(kPi))).epsilon(1e-12));
  CHECK(b42.values[0] == doctest::Approx(3.7081493546027438).epsilon(1e-12));

  const auto ball3 = lp_ball_moments(3, 2, 0);
  CHECK(ball3.values[0] == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-13));

  // classical ball-volume formula for a range of n
  for (int n = 1; n <= 6; ++n) {
    const auto m = lp_ball_moments(n, 2, 0);
    const double vn = std::pow(kPi, n / 2.0) / gamma_fn(1.0 + n / 2.0);
    CHECK(m.values[0] == doctest::Approx(vn).epsilon(1e-12));
  }
}

TEST_CASE("odd moments vanish bit-exactly") {
  for (int p : {2, 4}) {
    const auto m = lp_ball_moments(2, p, 5);
    for (int i = 0; i < m.basis.size(); ++i) {
      const auto& k = m.basis.list[i];
      if (k[0] % 2 == 1 || k[1] % 2 == 1) CHECK(m.values[i] == 0.0);
    }
  }
}

TEST_CASE("moments agree with Monte Carlo within 4 standard errors") {
  struct Cell {
    int n, p;
  };
  for (const Cell c : {Cell{2, 2}, Cell{2, 4}, Cell{3, 2}}) {
    const auto m = lp_ball_moments(c.n, c.p, 4);
    for (int i = 0; i < m.basis.size(); ++i) {
      const auto& k = m.basis.list[i];
      const auto est = mc_lp_moment(c.n, c.p, k, 1000000, 1234 + i);
      const double tol = 4.0 * std::max(est.std_error, 1e-12);
      CHECK(std::abs(m.values[i] - est.value) <= tol);
    }
  }
}

TEST_CASE("riesz functional") {
  const auto z = lp_ball_moments(2, 2, 2);
  CHECK(riesz(z, Polynomial::constant(2, 1.0)) == doctest::Approx(kPi).epsilon(1e-13));

  Polynomial r2(2);
  r2.add_term({2, 0}, 1.0);
  r2.add_term({0, 2}, 1.0);
  // independent oracle: polar coordinates give pi/2 for the unit disk
  CHECK(riesz(z, r2) == doctest::Approx(kPi / 2.0).epsilon(1e-12));

  CHECK(riesz(z, Polynomial(2)) == 0.0);

  Polynomial cube(2);
  cube.add_term({3, 0}, 1.0);
  CHECK_THROWS_AS(riesz(z, cube), std::out_of_range);
}

TEST_CASE("riesz is linear") {
  CounterRng rng(11);
  const auto z = lp_ball_moments(2, 2, 4);
  const auto basis = enumerate_monomials(2, 4);
  for (int t = 0; t < 30; ++t) {
    Polynomial p(2), q(2);
    for (const auto& k : basis.list) {
      p.add_term(k, rng.next_double() - 0.5);
      q.add_term(k, rng.next_double() - 0.5);
    }
    const double a = 2.0 * rng.next_double() - 1.0;
    const double b = 2.0 * rng.next_double() - 1.0;
    const double lhs = riesz(z, add(scale(p, a), scale(q, b)));
    const double rhs = a * riesz(z, p) + b * riesz(z, q);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("bounding set helpers") {
  const auto ball = BoundingSet::lp_ball(2, 4);
  const auto b = ball.defining_polynomial();
  CHECK(b.coeff({0, 0}) == 1.0);
  CHECK(b.coeff({4, 0}) == -1.0);
  CHECK(ball.contains(std::vector<double>{0.9, 0.5}));
  CHECK_FALSE(ball.contains(std::vector<double>{1.0, 0.5}));
  CHECK(ball.enclosing_box_volume() == doctest::Approx(4.0));
  CHECK_THROWS_AS(BoundingSet::lp_ball(2, 3).defining_polynomial(), std::invalid_argument);
}
