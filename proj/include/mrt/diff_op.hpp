#ifndef MRT_DIFF_OP_HPP
#define MRT_DIFF_OP_HPP

#include <map>
#include <vector>

#include "mrt/polynomial.hpp"
#include "mrt/sym_tensor.hpp"

namespace mrt {

// Differential operator sum_alpha c_alpha(x) d^alpha with multivariate
// polynomial coefficients; application and composition are exact.
class PolyDiffOp {
 public:
  PolyDiffOp() : n_(1) {}
  explicit PolyDiffOp(int n) : n_(n) {}

  static PolyDiffOp identity(int n);
  static PolyDiffOp partial(int n, int axis);
  static PolyDiffOp multiply(const Polynomial& p);
  static PolyDiffOp laplacian(int n);
  // (-Delta)^m
  static PolyDiffOp neg_laplacian_pow(int n, int m);

  int dim() const { return n_; }
  int order() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<std::vector<int>, Polynomial>& terms() const { return terms_; }

  void add_term(std::span<const int> alpha, const Polynomial& coeff);

  PolyDiffOp& operator+=(const PolyDiffOp& o);
  PolyDiffOp& operator-=(const PolyDiffOp& o);
  PolyDiffOp& operator*=(cplx s);
  friend PolyDiffOp operator+(PolyDiffOp a, const PolyDiffOp& b) { return a += b; }
  friend PolyDiffOp operator-(PolyDiffOp a, const PolyDiffOp& b) { return a -= b; }
  friend PolyDiffOp operator*(PolyDiffOp a, cplx s) { return a *= s; }
  friend PolyDiffOp operator*(cplx s, PolyDiffOp a) { return a *= s; }

  // Terms of exact total derivative order l.
  PolyDiffOp order_part(int l) const;

  bool same_terms(const PolyDiffOp& o, double tol = 0.0) const;

 private:
  int n_;
  std::map<std::vector<int>, Polynomial> terms_;
};

Polynomial op_apply(const PolyDiffOp& P, const Polynomial& u);

// Leibniz composition: (op_compose(P,Q))(u) = P(Q(u)).
PolyDiffOp op_compose(const PolyDiffOp& P, const PolyDiffOp& Q);

PolyDiffOp op_pow(const PolyDiffOp& P, int k);

// e^{-phi} P e^{phi}: every d_j becomes d_j + (d_j phi).
PolyDiffOp conjugate_exp(const PolyDiffOp& P, const Polynomial& phi);

// [P, phi] = P(phi u) - phi P(u); the linearization of conjugate_exp in phi.
PolyDiffOp commutator_with_function(const PolyDiffOp& P, const Polynomial& phi);

// Symmetrizes the order-l coefficients {c_alpha} at a point into a SymTensor
// t with sum_J mult(J) t_J d^J = sum_{|alpha|=l} c_alpha d^alpha.
SymTensor extract_coeff_tensor(const PolyDiffOp& P, int l, std::span<const double> x);

// Same identification at the polynomial level (no point evaluation).
std::vector<Polynomial> extract_coeff_tensor_polys(const PolyDiffOp& P, int l);

}  // namespace mrt

#endif
