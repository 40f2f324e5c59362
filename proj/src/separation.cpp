#include "mrt/separation.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "mrt/phantom.hpp"

namespace mrt {

SeparationMatrix separation_matrix(int m, std::span<const double> c) {
  if (static_cast<int>(c.size()) != m + 1) throw validation_error("separation_matrix: need m+1 constants");
  for (double v : c) {
    if (v == 0.0) throw validation_error("separation_matrix: constants must be nonzero");
  }
  SeparationMatrix A;
  A.m = m;
  A.c.assign(c.begin(), c.end());
  A.a.assign(static_cast<size_t>((m + 1) * (m + 1)), 0.0);
  for (int r = 0; r <= m; ++r) {
    for (int j = 0; j <= m; ++j) {
      A.a[static_cast<size_t>(r * (m + 1) + j)] =
          c[static_cast<size_t>(m - j)] * static_cast<double>(binomial(m - j + r, r));
    }
  }
  return A;
}

SeparationMatrix separation_matrix_shifted(int m, std::span<const double> d) {
  if (static_cast<int>(d.size()) != m) throw validation_error("separation_matrix_shifted: need m constants d_1..d_m");
  for (double v : d) {
    if (v == 0.0) throw validation_error("separation_matrix_shifted: constants must be nonzero");
  }
  SeparationMatrix A;
  A.m = m - 1;
  A.c.assign(d.begin(), d.end());
  A.a.assign(static_cast<size_t>(m * m), 0.0);
  // column j holds F_{m-j}; row r applies r directional derivatives.
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < m; ++j) {
      A.a[static_cast<size_t>(r * m + j)] =
          d[static_cast<size_t>(m - 1 - j)] * static_cast<double>(binomial(m - 1 - j + r, r));
    }
  }
  return A;
}

DeterminantCheck determinant_check(int m, std::span<const double> c) {
  const SeparationMatrix A = separation_matrix(m, c);
  Eigen::MatrixXd M(m + 1, m + 1);
  for (int r = 0; r <= m; ++r) {
    for (int j = 0; j <= m; ++j) M(r, j) = A.entry(r, j);
  }
  DeterminantCheck out;
  out.computed = Eigen::PartialPivLU<Eigen::MatrixXd>(M).determinant();
  double prod = 1.0;
  for (double v : c) prod *= v;
  const int expo = (m * (m + 1) / 2) % 2;
  out.formula = (expo ? -1.0 : 1.0) * prod;
  out.rel_error = std::abs(out.computed - out.formula) / std::abs(out.formula);
  return out;
}

namespace {

std::int64_t binom_det_recursive(std::vector<std::vector<std::int64_t>> B) {
  const size_t size = B.size();
  if (size == 1) return B[0][0];
  // Subtract each column from the one to its right (right-to-left), which
  // zeroes row 0 past the first entry.
  for (size_t j = size - 1; j >= 1; --j) {
    for (size_t r = 0; r < size; ++r) B[r][j] -= B[r][j - 1];
  }
  for (size_t j = 1; j < size; ++j) {
    if (B[0][j] != 0) throw numeric_guard_error("determinant recursion: unexpected matrix structure");
  }
  std::vector<std::vector<std::int64_t>> minor(size - 1, std::vector<std::int64_t>(size - 1));
  for (size_t r = 1; r < size; ++r) {
    for (size_t j = 1; j < size; ++j) minor[r - 1][j - 1] = B[r][j];
  }
  return B[0][0] * binom_det_recursive(std::move(minor));
}

}  // namespace

double determinant_by_column_recursion(int m, std::span<const double> c) {
  std::vector<std::vector<std::int64_t>> B(static_cast<size_t>(m + 1),
                                           std::vector<std::int64_t>(static_cast<size_t>(m + 1)));
  for (int r = 0; r <= m; ++r) {
    for (int j = 0; j <= m; ++j) B[static_cast<size_t>(r)][static_cast<size_t>(j)] = binomial(m - j + r, r);
  }
  const std::int64_t sign = binom_det_recursive(std::move(B));
  double prod = 1.0;
  for (double v : c) prod *= v;
  return static_cast<double>(sign) * prod;
}

std::vector<cplx> separate_components(const SeparationMatrix& A, std::span<const cplx> rhs) {
  const int size = A.m + 1;
  if (static_cast<int>(rhs.size()) != size) throw validation_error("separate_components: rhs size mismatch");
  Eigen::MatrixXd M(size, size);
  Eigen::VectorXcd b(size);
  for (int r = 0; r < size; ++r) {
    for (int j = 0; j < size; ++j) M(r, j) = A.entry(r, j);
    b(r) = rhs[static_cast<size_t>(r)];
  }
  const Eigen::VectorXcd x = M.partialPivLu().solve(b);
  std::vector<cplx> out(static_cast<size_t>(size));
  for (int i = 0; i < size; ++i) out[static_cast<size_t>(i)] = x(i);
  return out;
}

MixedField kernel_member_field(const GridDomain& grid, int m, std::uint64_t seed) {
  const int n = grid.dim();
  if (m > 4) throw validation_error("kernel_member_field: m <= 4 supported");
  MixedField F;
  for (int p = 0; p <= m; ++p) F.emplace_back(grid, p);
  if (m == 0 || m == 1) return F;  // trivial kernel: the zero field

  // Free lower-order parts, even and odd chains.
  for (int p = 0; p + 2 <= m; ++p) {
    F[static_cast<size_t>(p)] = random_smooth_field(grid, p, seed + static_cast<std::uint64_t>(p), 2, false);
  }
  const int even_top = 2 * (m / 2);
  const int odd_top = 2 * ((m - 1) / 2) + 1;
  {
    TensorField acc(grid, even_top - 2);
    for (int l = 1; 2 * l - 2 <= even_top - 2; ++l) {
      TensorField t = F[static_cast<size_t>(2 * l - 2)];
      for (int i = 0; i < m / 2 - l; ++i) t = field_i_delta(t);
      acc += t;
    }
    F[static_cast<size_t>(even_top)] = field_i_delta(acc) * cplx(-1.0);
  }
  if (odd_top >= 3) {
    TensorField acc(grid, odd_top - 2);
    for (int l = 1; 2 * l - 1 <= odd_top - 2; ++l) {
      TensorField t = F[static_cast<size_t>(2 * l - 1)];
      for (int i = 0; i < (m - 1) / 2 - l; ++i) t = field_i_delta(t);
      acc += t;
    }
    F[static_cast<size_t>(odd_top)] = field_i_delta(acc) * cplx(-1.0);
  } else if (odd_top == 1) {
    // forced zero (already zero-initialized)
  }
  return F;
}

namespace {

double mixed_norm(const MixedField& F) {
  double s = 0.0;
  for (const auto& part : F) {
    const double nn = l2_norm(part);
    s += nn * nn;
  }
  return std::sqrt(s);
}

double max_abs_value(const std::vector<cplx>& v) {
  double mx = 0.0;
  for (const cplx& c : v) mx = std::max(mx, std::abs(c));
  return mx;
}

void singular_extremes(const ImMatrix& mat, double& smin, double& smax) {
  Eigen::MatrixXd M(mat.rows, mat.cols);
  for (std::int64_t r = 0; r < mat.rows; ++r) {
    for (std::int64_t c = 0; c < mat.cols; ++c) M(r, c) = mat.entry(r, c);
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  smax = s(0);
  smin = s(s.size() - 1);
}

}  // namespace

KernelProbeReport kernel_probe(int m, int n, int grid_points, int ray_count, std::uint64_t seed) {
  if (m > 2 || n > 3) throw validation_error("kernel_probe: m <= 2 and n <= 3");
  const GridDomain grid = GridDomain::cube(n, grid_points);
  {
    std::int64_t interior = 1;
    for (int a = 0; a < n; ++a) interior *= grid.dims()[static_cast<size_t>(a)] - 2;
    std::int64_t unknowns = 0;
    for (int p = 0; p <= m; ++p) unknowns += sym_component_count(n, p) * interior;
    if (unknowns > 4000) throw numeric_guard_error("kernel_probe: interior unknown guard exceeded");
  }

  KernelProbeReport rep;
  rep.m = m;
  rep.n = n;
  const auto rays = make_ray_set(grid, ray_count, m, seed);

  // (a) members of the kernel family
  for (int trial = 0; trial < 5; ++trial) {
    MixedField F = kernel_member_field(grid, m, seed + 100 * static_cast<std::uint64_t>(trial + 1));
    const double nn = mixed_norm(F);
    if (nn > 0.0) {
      for (auto& part : F) part *= cplx(1.0 / nn);
    }
    const auto vals = transform_rays(F, rays);
    rep.member_residuals.push_back(max_abs_value(vals));
  }

  // (b) random unit-norm trace-free top parts violating the relations.
  // Single-blob fields: a trace-free direction tensor cannot contract to
  // zero against every ray direction, so the response floor is robust.
  for (int trial = 0; trial < 20; ++trial) {
    MixedField F;
    for (int p = 0; p <= m; ++p) F.emplace_back(grid, p);
    F[static_cast<size_t>(m)] =
        random_trace_free_field(grid, m, seed + 1000 + static_cast<std::uint64_t>(trial), 1, true);
    const auto vals = transform_rays(F, rays);
    rep.nonmember_residuals.push_back(max_abs_value(vals));
  }
  rep.quadrature_scale = 1.0;

  // (c) injectivity of I^m for m = 0, 1 on small grids
  {
    const GridDomain g0 = GridDomain::cube(n, 9);
    const auto r0 = make_ray_set(g0, 200, 0, seed + 7);
    singular_extremes(build_Im_matrix(g0, 0, r0), rep.sigma_min_m0, rep.sigma_max_m0);

    const GridDomain g1 = GridDomain::cube(n, n == 2 ? 9 : 7);
    std::int64_t interior = 1;
    for (int a = 0; a < n; ++a) interior *= g1.dims()[static_cast<size_t>(a)] - 2;
    std::int64_t unknowns = 0;
    for (int p = 0; p <= 1; ++p) unknowns += sym_component_count(n, p) * interior;
    const int nrays = static_cast<int>(3 * unknowns);
    const auto r1 = make_ray_set(g1, nrays, 1, seed + 8);
    singular_extremes(build_Im_matrix(g1, 1, r1), rep.sigma_min_m1, rep.sigma_max_m1);
  }
  return rep;
}

std::vector<std::pair<std::string, double>> KernelProbeReport::as_metrics() const {
  std::vector<std::pair<std::string, double>> kv;
  kv.emplace_back("m", m);
  kv.emplace_back("n", n);
  for (size_t i = 0; i < member_residuals.size(); ++i) {
    kv.emplace_back("member_residual_" + std::to_string(i), member_residuals[i]);
  }
  for (size_t i = 0; i < nonmember_residuals.size(); ++i) {
    kv.emplace_back("nonmember_residual_" + std::to_string(i), nonmember_residuals[i]);
  }
  kv.emplace_back("sigma_min_m0", sigma_min_m0);
  kv.emplace_back("sigma_max_m0", sigma_max_m0);
  kv.emplace_back("sigma_min_m1", sigma_min_m1);
  kv.emplace_back("sigma_max_m1", sigma_max_m1);
  return kv;
}

}  // namespace mrt
