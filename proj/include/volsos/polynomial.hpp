// Sparse multivariate polynomials over double coefficients, with the
// graded-lex monomial order used as the indexing backbone everywhere else.
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace volsos {

// Exponent vector; length is the ambient dimension.
using MultiIndex = std::vector<int>;

int multi_index_degree(const MultiIndex& k);

// Graded lexicographic order: lower total degree first, ties broken so that
// for n=2 the order is 1, x1, x2, x1^2, x1*x2, x2^2.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, double, GradedLexLess>;

  explicit Polynomial(int nvars);

  static Polynomial constant(int nvars, double c);
  static Polynomial monomial(const MultiIndex& k, double c = 1.0);
  // x_i with 0-based index i.
  static Polynomial variable(int nvars, int i);

  int nvars() const { return nvars_; }
  // Convention: the zero polynomial has degree 0.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  double coeff(const MultiIndex& k) const;
  // Adds c to the coefficient of x^k, erasing the term if it cancels.
  void add_term(const MultiIndex& k, double c);
  const TermMap& terms() const { return terms_; }

  std::string to_string() const;

 private:
  int nvars_;
  TermMap terms_;  // no stored zeros
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial multiply(const Polynomial& p, const Polynomial& q);
Polynomial scale(const Polynomial& p, double c);
Polynomial differentiate(const Polynomial& p, int i);
std::vector<Polynomial> gradient(const Polynomial& p);
Polynomial divergence(std::span<const Polynomial> u);
double evaluate(const Polynomial& p, std::span<const double> x);

inline Polynomial operator+(const Polynomial& p, const Polynomial& q) { return add(p, q); }
inline Polynomial operator-(const Polynomial& p, const Polynomial& q) { return add(p, scale(q, -1.0)); }
inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return multiply(p, q); }
inline Polynomial operator*(double c, const Polynomial& p) { return scale(p, c); }

// All monomials of degree <= max_degree in nvars variables, graded-lex
// ordered, with a reverse lookup map.
struct MonomialBasis {
  int nvars = 0;
  int max_degree = 0;
  std::vector<MultiIndex> list;
  std::map<MultiIndex, int, GradedLexLess> index;

  int size() const { return static_cast<int>(list.size()); }
  // Throws std::out_of_range if k is not in the basis.
  int lookup(const MultiIndex& k) const;
  bool contains(const MultiIndex& k) const { return index.count(k) > 0; }
};

MonomialBasis enumerate_monomials(int n, int t);

}  // namespace volsos
