#include "volsos/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace volsos {

int multi_index_degree(const MultiIndex& k) {
  int s = 0;
  for (int e : k) s += e;
  return s;
}

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int da = multi_index_degree(a);
  const int db = multi_index_degree(b);
  if (da != db) return da < db;
  // Within a degree, larger leading exponents come first: x1^2 < x1 x2 < x2^2.
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return a.size() < b.size();
}

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw std::invalid_argument("Polynomial: nvars must be >= 1");
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(MultiIndex(nvars, 0), c);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& k, double c) {
  Polynomial p(static_cast<int>(k.size()));
  for (int e : k) {
    if (e < 0) throw std::invalid_argument("Polynomial: negative exponent");
  }
  p.add_term(k, c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
  if (i < 0 || i >= nvars) throw std::out_of_range("Polynomial::variable: index");
  MultiIndex k(nvars, 0);
  k[i] = 1;
  return monomial(k, 1.0);
}

int Polynomial::degree() const {
  if (terms_.empty()) return 0;
  return multi_index_degree(terms_.rbegin()->first);
}

double Polynomial::coeff(const MultiIndex& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const MultiIndex& k, double c) {
  if (static_cast<int>(k.size()) != nvars_) {
    throw std::invalid_argument("Polynomial::add_term: multi-index length mismatch");
  }
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (int i = 0; i < nvars_; ++i) {
      if (k[i] > 0) {
        os << "*x" << (i + 1);
        if (k[i] > 1) os << "^" << k[i];
      }
    }
  }
  return os.str();
}

namespace {
void check_same_nvars(const Polynomial& p, const Polynomial& q, const char* op) {
  if (p.nvars() != q.nvars()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch");
  }
}
}  // namespace

Polynomial add(const Polynomial& p, const Polynomial& q) {
  check_same_nvars(p, q, "add");
  Polynomial r = p;
  for (const auto& [k, c] : q.terms()) r.add_term(k, c);
  return r;
}

Polynomial multiply(const Polynomial& p, const Polynomial& q) {
  check_same_nvars(p, q, "multiply");
  Polynomial r(p.nvars());
  MultiIndex k(p.nvars());
  for (const auto& [kp, cp] : p.terms()) {
    for (const auto& [kq, cq] : q.terms()) {
      for (int i = 0; i < p.nvars(); ++i) k[i] = kp[i] + kq[i];
      r.add_term(k, cp * cq);
    }
  }
  return r;
}

Polynomial scale(const Polynomial& p, double c) {
  Polynomial r(p.nvars());
  if (c == 0.0) return r;
  for (const auto& [k, v] : p.terms()) r.add_term(k, c * v);
  return r;
}

Polynomial differentiate(const Polynomial& p, int i) {
  if (i < 0 || i >= p.nvars()) throw std::out_of_range("differentiate: variable index");
  Polynomial r(p.nvars());
  for (const auto& [k, c] : p.terms()) {
    if (k[i] == 0) continue;
    MultiIndex dk = k;
    dk[i] -= 1;
    r.add_term(dk, c * k[i]);
  }
  return r;
}

std::vector<Polynomial> gradient(const Polynomial& p) {
  std::vector<Polynomial> g;
  g.reserve(p.nvars());
  for (int i = 0; i < p.nvars(); ++i) g.push_back(differentiate(p, i));
  return g;
}

Polynomial divergence(std::span<const Polynomial> u) {
  if (u.empty()) throw std::invalid_argument("divergence: empty field");
  const int n = u[0].nvars();
  if (static_cast<int>(u.size()) != n) {
    throw std::invalid_argument("divergence: component count must equal nvars");
  }
  Polynomial r(n);
  for (int i = 0; i < n; ++i) r = add(r, differentiate(u[i], i));
  return r;
}

double evaluate(const Polynomial& p, std::span<const double> x) {
  if (static_cast<int>(x.size()) != p.nvars()) {
    throw std::invalid_argument("evaluate: point dimension mismatch");
  }
  double s = 0.0;
  for (const auto& [k, c] : p.terms()) {
    double m = c;
    for (int i = 0; i < p.nvars(); ++i) {
      for (int e = 0; e < k[i]; ++e) m *= x[i];
    }
    s += m;
  }
  return s;
}

int MonomialBasis::lookup(const MultiIndex& k) const {
  auto it = index.find(k);
  if (it == index.end()) throw std::out_of_range("MonomialBasis::lookup: monomial not in basis");
  return it->second;
}

MonomialBasis enumerate_monomials(int n, int t) {
  if (n < 1) throw std::invalid_argument("enumerate_monomials: n must be >= 1");
  if (t < 0) throw std::invalid_argument("enumerate_monomials: t must be >= 0");
  MonomialBasis basis;
  basis.nvars = n;
  basis.max_degree = t;
  MultiIndex k(n, 0);
  // Enumerate degree by degree; within a degree, recurse in lex order with
  // larger leading exponents first, matching GradedLexLess.
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == n - 1) {
      k[pos] = remaining;
      basis.list.push_back(k);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      k[pos] = e;
      self(self, pos + 1, remaining - e);
    }
  };
  for (int deg = 0; deg <= t; ++deg) rec(rec, 0, deg);
  for (int i = 0; i < static_cast<int>(basis.list.size()); ++i) {
    basis.index.emplace(basis.list[i], i);
  }
  return basis;
}

}  // namespace volsos
