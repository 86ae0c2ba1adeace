// Closed-form Lebesgue moments on boxes and unit lp balls, and the Riesz
// linear functional pairing moment vectors with polynomials.
#pragma once

#include <span>
#include <vector>

#include "volsos/polynomial.hpp"

namespace volsos {

// A bounding set B with moments available in closed form. LpBall is always
// the unit ball {sum |x_i|^p <= 1}.
struct BoundingSet {
  enum class Kind { LpBall, Box };

  Kind kind = Kind::LpBall;
  int n = 0;
  int p = 2;               // LpBall only
  std::vector<double> lo;  // Box only
  std::vector<double> hi;

  static BoundingSet lp_ball(int n, int p);
  static BoundingSet box(std::vector<double> lo, std::vector<double> hi);

  // Defining polynomial b with B = {b >= 0}: 1 - sum x_i^p for an LpBall
  // with even p. Throws for boxes and odd p, where b is not a polynomial.
  Polynomial defining_polynomial() const;

  bool contains(std::span<const double> x) const;
  // Tight axis-aligned enclosing box ([-1,1]^n for lp balls).
  void enclosing_box(std::vector<double>& lo_out, std::vector<double>& hi_out) const;
  double enclosing_box_volume() const;
};

struct MomentVector {
  MonomialBasis basis;
  std::vector<double> values;  // aligned with basis.list
};

// log Gamma(x) for x > 0, relative error a few ulp.
double log_gamma(double x);
double gamma_fn(double x);

MomentVector box_moments(const BoundingSet& box, int t);
MomentVector lp_ball_moments(int n, int p, int t);
// Dispatch on the bounding set kind.
MomentVector lebesgue_moments(const BoundingSet& b, int t);

// Riesz functional L_y(q) = sum_k q_k y_k. Throws if q has a monomial
// outside y's basis.
double riesz(const MomentVector& y, const Polynomial& q);

}  // namespace volsos
