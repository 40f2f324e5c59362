#ifndef MRT_HELMHOLTZ_HPP
#define MRT_HELMHOLTZ_HPP

#include <optional>
#include <string>
#include <vector>

#include "mrt/tensor_field.hpp"

namespace mrt {

struct DecompositionResult {
  TensorField f_tilde;               // trace-free, iterated-divergence-free part
  std::optional<TensorField> v;      // rank m-2 potential (absent for m <= 1)
  TensorField phi;                   // scalar potential with zero boundary jets
  // residual norms, all relative to |f| except where noted
  double reassembly_rel = 0.0;       // |f - f_tilde - i_d v - d^m phi| / |f|
  double jdelta_ftilde = 0.0;        // max_abs j_delta f_tilde (absolute)
  double div_m_ftilde_rel = 0.0;     // |delta^m f_tilde| / |f| outside the zero-jet collar
  double cg_rel_residual = 0.0;
  int cg_iterations = 0;
  double phi_lowdeg_projection = 0.0;  // diagnostic: projection of phi onto degree < m polynomials

  std::vector<std::pair<std::string, double>> as_metrics() const;
};

// Trace-free Helmholtz decomposition f = f_tilde + i_delta v + d^m phi.
// Solves the discrete BVP for phi with zero jets of order < m (ghost margin
// of width m pinned to zero) by conjugate gradients on the SPD operator
// phi -> (-1)^m delta^m p d^m phi built from zero-extension stencils.
// f should be supported away from the faces (two-cell margin).
DecompositionResult helmholtz_trace_free(const TensorField& f, double cg_tol = 1e-8,
                                         int iter_cap_factor = 20);

// Applies the BVP operator to a scalar field whose margin of width m is zero.
TensorField bvp_operator_apply(const TensorField& phi, int m);

// Rayleigh value <j_{xi^m} p i_{xi^m} phi, phi> = |p i_{xi^m} phi|^2 for a
// scalar phi (1x1 symbol); strictly positive for phi != 0, xi != 0.
double symbol_rayleigh(std::span<const double> xi, int m, int n);

// Both sides of the symbol identity on a trace-free rank-m tensor f:
//   (m+1) |p i_vec(f, xi)|^2  ==  |xi|^2 |f|^2 + m (1 - 2/(n+2m-2)) |j_vec(f, xi)|^2.
std::pair<double, double> symbol_identity_sides(const SymTensor& trace_free_f,
                                                std::span<const double> xi);

}  // namespace mrt

#endif
