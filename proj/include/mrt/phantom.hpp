#ifndef MRT_PHANTOM_HPP
#define MRT_PHANTOM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "mrt/polynomial.hpp"
#include "mrt/tensor_field.hpp"

namespace mrt {

// C^{q-1} bump (1 - |x-c|^2/r^2)^q inside the ball, 0 outside.
double ball_bump(std::span<const double> x, std::span<const double> center, double radius, int q = 6);

// Scalar ball-bump field centered in the box, radius a fraction of the
// half-width so that a one-cell margin stays exactly zero.
TensorField scalar_bump_field(const GridDomain& grid, double radius_frac = 0.75, int q = 6);

// Smooth compactly supported rank-m field: a few random constant tensors
// modulated by random interior bumps. Unit L2 norm when normalize is set.
TensorField random_smooth_field(const GridDomain& grid, int rank, std::uint64_t seed,
                                int blobs = 3, bool normalize = true);

// Same, projected pointwise to trace-free.
TensorField random_trace_free_field(const GridDomain& grid, int rank, std::uint64_t seed,
                                    int blobs = 3, bool normalize = true);

// Trace-free rank-2 bump: fixed trace-free direction tensor times a bump.
TensorField trace_free_bump_field(const GridDomain& grid, std::uint64_t seed = 0);

// Divergence-free construction for the top coefficient: d^{2m-2} w with
// w = (d_2 psi, -d_1 psi, 0, ...) for a scalar bump psi (n >= 2).
TensorField divergence_free_phantom(const GridDomain& grid, int m);

SymTensor random_tensor(int n, int m, std::mt19937_64& rng, double scale = 1.0);

// Polynomial with zero boundary jets of order < 2m on the cube of the given
// half-width: prod_a (half^2 - x_a^2)^{2m} / half^{4mn}.
Polynomial zero_jet_bump_poly(int n, int m, double half_width = 1.0);

}  // namespace mrt

#endif
