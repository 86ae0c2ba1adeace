#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "volsos/polynomial.hpp"
#include "volsos/rng.hpp"

using namespace volsos;

namespace {

Polynomial random_poly(CounterRng& rng, int n, int max_deg) {
  Polynomial p(n);
  const auto basis = enumerate_monomials(n, max_deg);
  for (const auto& k : basis.list) {
    if (rng.next_double() < 0.4) p.add_term(k, 2.0 * rng.next_double() - 1.0);
  }
  if (p.is_zero()) p.add_term(MultiIndex(n, 0), 1.0);
  return p;
}

Polynomial disk_g() {
  // 1/4 - (x1 - 1/2)^2 - x2^2
  Polynomial g(2);
  g.add_term({1, 0}, 1.0);
  g.add_term({2, 0}, -1.0);
  g.add_term({0, 2}, -1.0);
  return g;
}

}  // namespace

TEST_CASE("monomial enumeration, graded lex") {
  const auto b22 = enumerate_monomials(2, 2);
  const std::vector<MultiIndex> expect = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  CHECK(b22.list == expect);
  CHECK(b22.size() == 6);

  const auto b13 = enumerate_monomials(1, 3);
  CHECK(b13.list == std::vector<MultiIndex>{{0}, {1}, {2}, {3}});

  CHECK(enumerate_monomials(3, 4).size() == 35);

  // lookup is a bijection on the list
  for (int i = 0; i < b22.size(); ++i) CHECK(b22.lookup(b22.list[i]) == i);
  CHECK_THROWS_AS((void)b22.lookup({3, 0}), std::out_of_range);

  // order matches a brute-force comparator and is total
  GradedLexLess less;
  const auto b34 = enumerate_monomials(3, 4);
  for (int i = 0; i + 1 < b34.size(); ++i) {
    CHECK(less(b34.list[i], b34.list[i + 1]));
    CHECK_FALSE(less(b34.list[i + 1], b34.list[i]));
  }
}

TEST_CASE("ring operations") {
  const Polynomial x1 = Polynomial::variable(2, 0);
  const Polynomial sq = multiply(x1, x1);
  CHECK(sq.coeff({2, 0}) == 1.0);
  CHECK(sq.terms().size() == 1);

  CounterRng rng(7);
  for (int t = 0; t < 20; ++t) {
    const Polynomial p = random_poly(rng, 2, 4);
    CHECK(add(p, scale(p, -1.0)).is_zero());
  }

  CHECK_THROWS_AS(add(Polynomial(2), Polynomial(3)), std::invalid_argument);
}

TEST_CASE("double-disk product expansion") {
  // (1/16 - (x1-1/2)^2 - x2^2) * ((x1+1/2)^2 + x2^2 - 1/16)
  Polynomial f1(2), f2(2);
  f1.add_term({0, 0}, 1.0 / 16 - 1.0 / 4);
  f1.add_term({1, 0}, 1.0);
  f1.add_term({2, 0}, -1.0);
  f1.add_term({0, 2}, -1.0);
  f2.add_term({0, 0}, 1.0 / 4 - 1.0 / 16);
  f2.add_term({1, 0}, 1.0);
  f2.add_term({2, 0}, 1.0);
  f2.add_term({0, 2}, 1.0);
  const Polynomial g = multiply(f1, f2);
  // frozen from an independent symbolic expansion
  CHECK(g.coeff({4, 0}) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(g.coeff({2, 2}) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(g.coeff({0, 4}) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(g.coeff({2, 0}) == doctest::Approx(5.0 / 8).epsilon(1e-14));
  CHECK(g.coeff({0, 2}) == doctest::Approx(-3.0 / 8).epsilon(1e-14));
  CHECK(g.coeff({0, 0}) == doctest::Approx(-9.0 / 256).epsilon(1e-14));
  CHECK(g.degree() == 4);
}

TEST_CASE("calculus") {
  Polynomial p(2);
  p.add_term({2, 1}, 1.0);  // x1^2 x2
  const Polynomial dp = differentiate(p, 0);
  CHECK(dp.coeff({1, 1}) == 2.0);

  const Polynomial g = disk_g();
  const auto grad = gradient(g);
  CHECK(grad[0].coeff({0, 0}) == 1.0);
  CHECK(grad[0].coeff({1, 0}) == -2.0);
  CHECK(grad[1].coeff({0, 1}) == -2.0);
  CHECK(differentiate(Polynomial::constant(2, 3.0), 1).is_zero());

  // divergence(gradient(x1^2 + x2^2)) = 4
  Polynomial q(2);
  q.add_term({2, 0}, 1.0);
  q.add_term({0, 2}, 1.0);
  const auto gq = gradient(q);
  CHECK(divergence(gq).coeff({0, 0}) == 4.0);

  std::vector<Polynomial> lin;
  for (int i = 0; i < 3; ++i) lin.push_back(Polynomial::variable(3, i));
  CHECK(divergence(lin).coeff({0, 0, 0}) == 3.0);

  CHECK_THROWS_AS(differentiate(p, 5), std::out_of_range);
}

TEST_CASE("evaluation") {
  const Polynomial g = disk_g();
  CHECK(evaluate(g, std::vector<double>{0.5, 0.0}) == doctest::Approx(0.25));
  CHECK(evaluate(g, std::vector<double>{1.0, 0.0}) == doctest::Approx(0.0));

  Polynomial p(2);
  p.add_term({3, 1}, 1.0);
  p.add_term({0, 0}, -2.0);
  CHECK(evaluate(p, std::vector<double>{2.0, 3.0}) == 22.0);
}

TEST_CASE("Leibniz rule on random instances") {
  CounterRng rng(42);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 3);
    const Polynomial p = random_poly(rng, n, 3);
    const Polynomial q = random_poly(rng, n, 3);
    const int i = static_cast<int>(rng.next_u64() % n);
    const Polynomial lhs = differentiate(multiply(p, q), i);
    const Polynomial rhs =
        add(multiply(differentiate(p, i), q), multiply(p, differentiate(q, i)));
    const Polynomial diff = lhs - rhs;
    for (const auto& [k, c] : diff.terms()) CHECK(std::abs(c) < 1e-12);
  }
}

TEST_CASE("evaluate respects ring operations") {
  CounterRng rng(99);
  for (int t = 0; t < 50; ++t) {
    const Polynomial p = random_poly(rng, 3, 3);
    const Polynomial q = random_poly(rng, 3, 3);
    std::vector<double> x = {rng.next_double() - 0.5, rng.next_double() - 0.5,
                             rng.next_double() - 0.5};
    const double lhs = evaluate(multiply(p, q), x);
    const double rhs = evaluate(p, x) * evaluate(q, x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    if (!p.is_zero() && !q.is_zero()) {
      CHECK(multiply(p, q).degree() <= p.degree() + q.degree());
    }
  }
}

TEST_CASE("degree of product adds for generic instances") {
  CounterRng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Polynomial p = random_poly(rng, 2, 4);
    const Polynomial q = random_poly(rng, 2, 4);
    // generic random coefficients: no top-degree cancellation
    CHECK(multiply(p, q).degree() == p.degree() + q.degree());
  }
}
