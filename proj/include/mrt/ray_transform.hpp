#ifndef MRT_RAY_TRANSFORM_HPP
#define MRT_RAY_TRANSFORM_HPP

#include <cstdint>
#include <vector>

#include "mrt/tensor_field.hpp"

namespace mrt {

// Line x + t xi with a momentum order k: the integrand weight is t^k.
struct Ray {
  std::vector<double> base;
  std::vector<double> dir;
  int k = 0;
};

struct RaySample {
  Ray ray;
  cplx value;
  double step = 0.0;
};

// Direct sum of tensor fields of ranks 0..m on one grid.
using MixedField = std::vector<TensorField>;

void validate_mixed_field(const MixedField& F);

// Intersection parameters [t0, t1] of the ray with the grid box; empty -> false.
bool clip_ray_to_box(const GridDomain& grid, const Ray& ray, double& t0, double& t1);

// J^k F: composite-trapezoid quadrature of t^k sum_p <F_p(x+t xi), xi^p> along
// the clipped ray; multilinear interpolation per component. Rays missing the
// box give 0.
cplx forward_Jk(const MixedField& F, const Ray& ray);

// Batch transform, parallel over rays.
std::vector<cplx> transform_rays(const MixedField& F, const std::vector<Ray>& rays);

// Equidistributed unit directions x uniform lateral offsets, seeded.
std::vector<Ray> make_ray_set(const GridDomain& grid, int count, int k, std::uint64_t seed);

// Weighted moment transform on the hyperplane x_1 = 0: integrates
// s^alpha <f(0, s eta + x''-offset), (e_1 + i eta)^{rank}> over s, where x''
// holds coordinates along the frame axes 3..n.
cplx axis_moment_transform(const TensorField& f, std::span<const double> eta,
                           std::span<const double> x_rest, int alpha);

// Dense matrix of rays x interior unknowns for the restricted transform I^k
// of mixed fields of ranks 0..m. Unknowns are ordered rank-major, then
// component, then interior point (one-cell margin excluded).
struct ImMatrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> a;  // row-major
  int max_rank = 0;
  std::vector<std::int64_t> rank_offsets;      // per rank p: first column
  std::vector<std::int64_t> interior_points;   // flattened grid ids

  double entry(std::int64_t r, std::int64_t c) const { return a[static_cast<size_t>(r * cols + c)]; }
};

ImMatrix build_Im_matrix(const GridDomain& grid, int m, const std::vector<Ray>& rays);

// Stacks a mixed field into the unknown vector layout of build_Im_matrix.
std::vector<cplx> pack_mixed_field(const ImMatrix& mat, const MixedField& F);

std::vector<cplx> im_matrix_apply(const ImMatrix& mat, const MixedField& F);

}  // namespace mrt

#endif
