#ifndef MRT_CGO_HPP
#define MRT_CGO_HPP

#include <utility>
#include <vector>

#include "mrt/diff_op.hpp"
#include "mrt/tensor_field.hpp"

namespace mrt {

// Orthonormal frame {e_1, eta, w_3, ..., w_n}; rows of `axes`.
struct Frame {
  int n = 0;
  std::vector<std::vector<double>> axes;

  std::vector<double> to_frame(std::span<const double> x) const;  // y = R x
};

Frame make_frame(std::span<const double> eta);

struct CgoParams {
  double h = 0.1;
  std::vector<double> eta;  // unit, orthogonal to e_1
  Frame frame;

  // zeta = e_1 + i eta
  std::vector<cplx> zeta() const;
};

CgoParams make_cgo_params(int n, double h, std::span<const double> eta);

// T = 2 (d_{y1} + i d_{y2}), the transport operator in frame coordinates.
PolyDiffOp transport_op(int n);

Polynomial transport_apply(const Polynomial& a, int power = 1);

// d/dzbar = (1/2)(d_{y1} + i d_{y2}); exact on polynomials in y.
Polynomial dzbar_apply(const Polynomial& a, int power = 1);

// z = y1 + i y2 and zbar as polynomials in the y variables.
Polynomial z_poly(int n);
Polynomial zbar_poly(int n);

// (z - zbar)^k * f(z) with f given by complex coefficients of powers of z.
Polynomial poly_analytic_term(int n, int k, std::span<const cplx> f_coeffs);

// u = exp(zeta.x/h) a0(y(x)), v = exp(-zeta.x/h) b0(y(x)), sampled on the grid.
// Validates T^m a0 = T^m b0 = 0.
std::pair<TensorField, TensorField> cgo_pair(const CgoParams& params, int m,
                                             const Polynomial& a0, const Polynomial& b0,
                                             const GridDomain& grid);

// sup over grid of |(-T/h - Delta)^m a0| evaluated in frame coordinates;
// the polyharmonic defect of the truncated expansion, reported not asserted.
double cgo_residual_sup(const CgoParams& params, int m, const Polynomial& a0,
                        const GridDomain& grid);

}  // namespace mrt

#endif
