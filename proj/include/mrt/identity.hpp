#ifndef MRT_IDENTITY_HPP
#define MRT_IDENTITY_HPP

#include <string>
#include <vector>

#include "mrt/cgo.hpp"
#include "mrt/diff_op.hpp"
#include "mrt/tensor_field.hpp"

namespace mrt {

// Coefficient fields a^0..a^{2m-1} of Q(x,D) = sum_l <a^l, D^l> with
// D_j = (1/i) d_j; stored in that D-convention (complex-valued).
struct CoefficientSet {
  int m = 0;
  std::vector<TensorField> a;  // ranks 0..2m-1

  const GridDomain& grid() const { return a.at(0).grid(); }
  double max_abs_all() const;
};

CoefficientSet zero_coefficients(const GridDomain& grid, int m);

// Samples the coefficients of a symbolic operator Q (written in the d^alpha
// convention) onto the grid, converting to the D-convention tensors.
CoefficientSet coefficient_set_from_operator(const PolyDiffOp& Q, int m, const GridDomain& grid);

struct IdentityReport {
  cplx value;
  double scale = 0.0;     // quadrature of the absolute integrand
  double quad_tol = 0.0;  // pinned tolerance: 25 h^2 * scale
};

// Trapezoid quadrature of sum_l <a^l, D^l u> v over the box.
IdentityReport integral_identity(const CoefficientSet& coeffs, const TensorField& u,
                                 const TensorField& v);

// Exact-amplitude identity value for the CGO pair
//   u = e^{zeta.x/h} a0(y), v = e^{-zeta.x/h} b0(y);
// the phases cancel and the amplitude derivatives are expanded symbolically,
// so only volume-quadrature error remains. Exactly polynomial in 1/h.
cplx cgo_identity_value(const CoefficientSet& coeffs, const CgoParams& params,
                        const Polynomial& a0, const Polynomial& b0, double h);

// Polynomials annihilated by Delta^m up to the degree cap: harmonic family
// Re/Im (x_a + i x_b)^d times |x|^{2j}, j < m. Each emitted polynomial is
// verified exactly against (-Delta)^m.
std::vector<Polynomial> polyharmonic_basis(int m, int max_degree, int n);

struct GaugeReport {
  int m = 0;
  bool top_operator_exact = false;   // order-(2m-1) part equals (-1)^m 2m grad(phi).grad Lap^{m-1}
  double top_tensor_max_diff = 0.0;  // extract_coeff_tensor vs (-1)^m 2m i_delta^{m-1}(grad phi)
  double identity_max_ratio = 0.0;   // max |value|/quad_tol over the basis pairs (linearized gauge)
  double conjugated_pair_ratio = 0.0;  // finite conjugation with u = e^{-phi} w
  double zero_phi_max_abs = 0.0;     // coefficients of the constant-phi gauge

  std::vector<std::pair<std::string, double>> as_metrics() const;
};

GaugeReport gauge_experiment(int m, const Polynomial& phi, const GridDomain& grid,
                             int basis_degree = 4);

struct HypothesisReport {
  double trace_residual = 0.0;     // max |j_delta a|
  double div_residual_rel = 0.0;   // |delta^{2m-1} a| / |a|
  double jet_residual = 0.0;       // max one-sided normal derivative, orders <= 2m-1
  bool trace_free_pass = false;    // <= 1e-10
  bool div_free_pass = false;      // <= 50 h^2
  bool boundary_jets_pass = false; // <= 10 h^2 * max|a|

  std::vector<std::pair<std::string, double>> as_metrics() const;
};

HypothesisReport hypothesis_check(const TensorField& top_coeff, int m);

}  // namespace mrt

#endif
