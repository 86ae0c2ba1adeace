#include "volsos/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace volsos {

BoundingSet BoundingSet::lp_ball(int n, int p) {
  if (n < 1) throw std::invalid_argument("BoundingSet::lp_ball: n must be >= 1");
  if (p < 1) throw std::invalid_argument("BoundingSet::lp_ball: p must be >= 1");
  BoundingSet b;
  b.kind = Kind::LpBall;
  b.n = n;
  b.p = p;
  return b;
}

BoundingSet BoundingSet::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size()) {
    throw std::invalid_argument("BoundingSet::box: lo/hi size mismatch");
  }
  for (size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw std::invalid_argument("BoundingSet::box: requires lo < hi");
  }
  BoundingSet b;
  b.kind = Kind::Box;
  b.n = static_cast<int>(lo.size());
  b.lo = std::move(lo);
  b.hi = std::move(hi);
  return b;
}

Polynomial BoundingSet::defining_polynomial() const {
  if (kind != Kind::LpBall || p % 2 != 0) {
    throw std::invalid_argument("BoundingSet: defining polynomial requires an even-p lp ball");
  }
  Polynomial b = Polynomial::constant(n, 1.0);
  for (int i = 0; i < n; ++i) {
    MultiIndex k(n, 0);
    k[i] = p;
    b.add_term(k, -1.0);
  }
  return b;
}

bool BoundingSet::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("BoundingSet::contains: dimension");
  if (kind == Kind::Box) {
    for (int i = 0; i < n; ++i) {
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    }
    return true;
  }
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::pow(std::abs(x[i]), p);
  return s <= 1.0;
}

void BoundingSet::enclosing_box(std::vector<double>& lo_out, std::vector<double>& hi_out) const {
  if (kind == Kind::Box) {
    lo_out = lo;
    hi_out = hi;
  } else {
    lo_out.assign(n, -1.0);
    hi_out.assign(n, 1.0);
  }
}

double BoundingSet::enclosing_box_volume() const {
  std::vector<double> l, h;
  enclosing_box(l, h);
  double v = 1.0;
  for (int i = 0; i < n; ++i) v *= h[i] - l[i];
  return v;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("log_gamma: requires x > 0");
  return std::lgamma(x);
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("gamma: requires x > 0");
  return std::tgamma(x);
}

MomentVector box_moments(const BoundingSet& box, int t) {
  if (box.kind != BoundingSet::Kind::Box) throw std::invalid_argument("box_moments: not a box");
  MomentVector m;
  m.basis = enumerate_monomials(box.n, t);
  m.values.resize(m.basis.size());
  for (int idx = 0; idx < m.basis.size(); ++idx) {
    const MultiIndex& k = m.basis.list[idx];
    double v = 1.0;
    for (int i = 0; i < box.n; ++i) {
      const int e = k[i] + 1;
      v *= (std::pow(box.hi[i], e) - std::pow(box.lo[i], e)) / e;
    }
    m.values[idx] = v;
  }
  return m;
}

MomentVector lp_ball_moments(int n, int p, int t) {
  if (n < 1 || p < 1 || t < 0) throw std::invalid_argument("lp_ball_moments: bad arguments");
  MomentVector m;
  m.basis = enumerate_monomials(n, t);
  m.values.resize(m.basis.size());
  for (int idx = 0; idx < m.basis.size(); ++idx) {
    const MultiIndex& k = m.basis.list[idx];
    bool odd = false;
    for (int e : k) {
      if (e % 2 != 0) {
        odd = true;
        break;
      }
    }
    if (odd) {
      m.values[idx] = 0.0;  // bit-exact zero for odd moments
      continue;
    }
    // Gamma ratios overflow for moderate n + |k|; work in log space.
    double lg = n * (std::log(2.0) - std::log(static_cast<double>(p)));
    lg -= log_gamma(1.0 + static_cast<double>(n + multi_index_degree(k)) / p);
    for (int e : k) lg += log_gamma((1.0 + e) / p);
    m.values[idx] = std::exp(lg);
  }
  return m;
}

MomentVector lebesgue_moments(const BoundingSet& b, int t) {
  return b.kind == BoundingSet::Kind::Box ? box_moments(b, t) : lp_ball_moments(b.n, b.p, t);
}

double riesz(const MomentVector& y, const Polynomial& q) {
  if (q.nvars() != y.basis.nvars) throw std::invalid_argument("riesz: dimension mismatch");
  double s = 0.0;
  for (const auto& [k, c] : q.terms()) {
    auto it = y.basis.index.find(k);
    if (it == y.basis.index.end()) {
      throw std::out_of_range("riesz: polynomial degree exceeds moment vector basis");
    }
    s += c * y.values[it->second];
  }
  return s;
}

}  // namespace volsos
