#ifndef MRT_SERIAL_REF_HPP
#define MRT_SERIAL_REF_HPP

#include "mrt/ray_transform.hpp"

namespace mrt::serial {

// Straight single-threaded implementations of the parallel kernels, kept as
// the reference the OpenMP paths are tested and benchmarked against.

cplx forward_Jk(const MixedField& F, const Ray& ray);
std::vector<cplx> transform_rays(const MixedField& F, const std::vector<Ray>& rays);

TensorField sym_derivative(const TensorField& f, FaceRule rule = FaceRule::one_sided_faces);
TensorField divergence(const TensorField& f, FaceRule rule = FaceRule::one_sided_faces);

}  // namespace mrt::serial

#endif
