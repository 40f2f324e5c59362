#ifndef MRT_SEPARATION_HPP
#define MRT_SEPARATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mrt/ray_transform.hpp"

namespace mrt {

// (m+1) x (m+1) matrix A[r][j] = c_{m-j} * C(m-j+r, r), the system obtained by
// applying r directional derivatives along xi to a sum of momentum transforms
// of orders k..k+m.
struct SeparationMatrix {
  int m = 0;
  std::vector<double> c;  // c_0..c_m
  std::vector<double> a;  // row-major (m+1)^2

  double entry(int r, int j) const { return a[static_cast<size_t>(r) * static_cast<size_t>(m + 1) + static_cast<size_t>(j)]; }
};

SeparationMatrix separation_matrix(int m, std::span<const double> c);

// Shifted variant for sums d_m I^{k+m-1}F_m + ... + d_1 I^k F_1 (m rows).
SeparationMatrix separation_matrix_shifted(int m, std::span<const double> d);

struct DeterminantCheck {
  double computed = 0.0;  // LU with partial pivoting
  double formula = 0.0;   // (-1)^{m(m+1)/2} c_0...c_m
  double rel_error = 0.0;
};

DeterminantCheck determinant_check(int m, std::span<const double> c);

// Independent path: the column-subtraction recursion on the pure binomial
// matrix (exact integer arithmetic), multiplied by prod c_j.
double determinant_by_column_recursion(int m, std::span<const double> c);

// Solves A X = rhs; X = (I^m F_m, ..., I^0 F_0).
std::vector<cplx> separate_components(const SeparationMatrix& A, std::span<const cplx> rhs);

// Kernel probe report for the restricted transform I^m.
struct KernelProbeReport {
  int m = 0;
  int n = 0;
  double quadrature_scale = 0.0;  // reference: max |I^m| response of a unit bump
  std::vector<double> member_residuals;      // fields built from the kernel relations
  std::vector<double> nonmember_residuals;   // random unit-norm trace-free fields
  double sigma_min_m0 = 0.0, sigma_max_m0 = 0.0;
  double sigma_min_m1 = 0.0, sigma_max_m1 = 0.0;

  std::vector<std::pair<std::string, double>> as_metrics() const;
};

// Builds a mixed field in the kernel of I^m from free lower-order parts,
// following the even/odd relations characterizing ker I^m.
MixedField kernel_member_field(const GridDomain& grid, int m, std::uint64_t seed);

KernelProbeReport kernel_probe(int m, int n, int grid_points, int ray_count, std::uint64_t seed);

}  // namespace mrt

#endif
