#ifndef MRT_TENSOR_FIELD_HPP
#define MRT_TENSOR_FIELD_HPP

#include <functional>
#include <span>
#include <vector>

#include "mrt/grid.hpp"
#include "mrt/sym_tensor.hpp"
#include "mrt/tensor_ops.hpp"

namespace mrt {

// How derivative stencils treat the box faces. one_sided_faces keeps
// second-order accuracy up to the boundary; zero_extension uses central
// differences everywhere with out-of-range neighbours read as zero, which
// makes -d and delta exactly adjoint on the grid (used by the BVP solver).
enum class FaceRule { one_sided_faces, zero_extension };

// SymTensor-valued function on a grid, structure-of-arrays: one contiguous
// plane of grid values per compressed component.
class TensorField {
 public:
  TensorField() = default;
  TensorField(GridDomain grid, int rank);

  const GridDomain& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  int rank() const { return rank_; }
  std::int64_t num_components() const { return ncomp_; }

  std::span<cplx> plane(std::int64_t comp) { return {data_.data() + comp * grid_.num_points(), static_cast<size_t>(grid_.num_points())}; }
  std::span<const cplx> plane(std::int64_t comp) const { return {data_.data() + comp * grid_.num_points(), static_cast<size_t>(grid_.num_points())}; }

  cplx& at(std::int64_t comp, std::int64_t point) { return data_[static_cast<size_t>(comp * grid_.num_points() + point)]; }
  const cplx& at(std::int64_t comp, std::int64_t point) const { return data_[static_cast<size_t>(comp * grid_.num_points() + point)]; }

  SymTensor tensor_at(std::int64_t point) const;
  void set_tensor_at(std::int64_t point, const SymTensor& t);

  TensorField& operator+=(const TensorField& o);
  TensorField& operator-=(const TensorField& o);
  TensorField& operator*=(cplx s);
  friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
  friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
  friend TensorField operator*(TensorField a, cplx s) { return a *= s; }

  // Multilinear interpolation of one component; zero outside the box.
  cplx interpolate(std::int64_t comp, std::span<const double> x) const;

 private:
  GridDomain grid_;
  int rank_ = 0;
  std::int64_t ncomp_ = 0;
  std::vector<cplx> data_;
};

TensorField make_field(const GridDomain& grid, int rank,
                       const std::function<SymTensor(std::span<const double>)>& sampler);

// Symmetrized gradient d: rank m -> m+1, second-order stencils.
TensorField sym_derivative(const TensorField& f, FaceRule rule = FaceRule::one_sided_faces);

// Divergence: contraction of the derivative slot, rank m -> m-1.
TensorField divergence(const TensorField& f, FaceRule rule = FaceRule::one_sided_faces);

TensorField sym_derivative_pow(TensorField f, int k, FaceRule rule = FaceRule::one_sided_faces);
TensorField divergence_pow(TensorField f, int k, FaceRule rule = FaceRule::one_sided_faces);

// Iterated partial derivative of a scalar field; alpha holds per-axis orders.
TensorField scalar_partial(const TensorField& u, std::span<const int> alpha,
                           FaceRule rule = FaceRule::one_sided_faces);

// Sum_l sum_idx multiplicity * a^l[idx](x) * D^idx u(x) with D_j = (1/i) d_j.
TensorField apply_coeff_op(const std::vector<TensorField>& coeffs, const TensorField& u);

// Applies a pointwise component map at every grid point.
TensorField apply_pointwise(const PointwiseMap& map, const TensorField& f, int rank_out);

// Pointwise i_delta / j_delta / trace-free projection on fields.
TensorField field_i_delta(const TensorField& f);
TensorField field_j_delta(const TensorField& f);
TensorField field_project_trace_free(const TensorField& f);

// Discrete L2 norm: sqrt(sum_pts sum_idx mult |f|^2 * cell volume).
double l2_norm(const TensorField& f);
// Same, restricted to points at least `margin` cells away from every face.
double l2_norm_interior(const TensorField& f, int margin);
double max_abs(const TensorField& f);

// Multiplicity-weighted L2 inner product (sesquilinear), cell-volume weighted.
cplx field_inner(const TensorField& f, const TensorField& g);

// Trapezoid quadrature of a scalar field over the box.
cplx integrate_trapezoid(const TensorField& u);

// Largest one-sided normal-derivative magnitude over all faces, orders
// 0..order, scaled by nothing (raw estimate).
double boundary_jet_residual(const TensorField& f, int order);

}  // namespace mrt

#endif
