#ifndef MRT_POLYNOMIAL_HPP
#define MRT_POLYNOMIAL_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mrt/types.hpp"

namespace mrt {

// Multivariate polynomial with complex coefficients, exact term arithmetic.
// Exponent vectors have fixed length n; zero coefficients are never stored.
class Polynomial {
 public:
  Polynomial() : n_(1) {}
  explicit Polynomial(int n) : n_(n) {}

  static Polynomial constant(int n, cplx c);
  static Polynomial variable(int n, int axis, int power = 1);
  static Polynomial monomial(int n, std::span<const int> expo, cplx c);
  // c0 + sum_j a_j x_j
  static Polynomial linear(std::span<const cplx> a, cplx c0 = 0.0);

  int dim() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  const std::map<std::vector<int>, cplx>& terms() const { return terms_; }

  void add_term(std::span<const int> expo, cplx c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(cplx s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
  friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  Polynomial derivative(int axis) const;

  cplx eval(std::span<const double> x) const;
  cplx eval(std::span<const cplx> x) const;

  bool same_terms(const Polynomial& o, double tol = 0.0) const;

  // "coeff * x1^a1*x2^a2 + ..." with decimal or rational coefficients;
  // complex coefficients in parentheses, e.g. "(1.5-2i) * x1^2".
  std::string to_string() const;
  static Polynomial parse(const std::string& text, int n);

 private:
  int n_;
  std::map<std::vector<int>, cplx> terms_;
};

}  // namespace mrt

#endif
