#include "mrt/phantom.hpp"

#include <cmath>

namespace mrt {

double ball_bump(std::span<const double> x, std::span<const double> center, double radius, int q) {
  double r2 = 0.0;
  for (size_t a = 0; a < x.size(); ++a) {
    const double d = x[a] - center[a];
    r2 += d * d;
  }
  const double s = 1.0 - r2 / (radius * radius);
  if (s <= 0.0) return 0.0;
  double v = 1.0;
  for (int i = 0; i < q; ++i) v *= s;
  return v;
}

TensorField scalar_bump_field(const GridDomain& grid, double radius_frac, int q) {
  const int n = grid.dim();
  const auto lo = grid.box_min();
  const auto hi = grid.box_max();
  std::vector<double> center(static_cast<size_t>(n));
  double half = 1e300;
  for (int a = 0; a < n; ++a) {
    center[static_cast<size_t>(a)] = 0.5 * (lo[static_cast<size_t>(a)] + hi[static_cast<size_t>(a)]);
    half = std::min(half, 0.5 * (hi[static_cast<size_t>(a)] - lo[static_cast<size_t>(a)]));
  }
  const double radius = radius_frac * half;
  return make_field(grid, 0, [&](std::span<const double> x) {
    return SymTensor::scalar(n, ball_bump(x, center, radius, q));
  });
}

SymTensor random_tensor(int n, int m, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymTensor t(n, m);
  for (std::int64_t i = 0; i < t.size(); ++i) t[i] = cplx(u(rng) * scale, 0.0);
  return t;
}

TensorField random_smooth_field(const GridDomain& grid, int rank, std::uint64_t seed,
                                int blobs, bool normalize) {
  const int n = grid.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto lo = grid.box_min();
  const auto hi = grid.box_max();
  std::vector<double> center(static_cast<size_t>(n));
  double half = 1e300;
  for (int a = 0; a < n; ++a) {
    center[static_cast<size_t>(a)] = 0.5 * (lo[static_cast<size_t>(a)] + hi[static_cast<size_t>(a)]);
    half = std::min(half, 0.5 * (hi[static_cast<size_t>(a)] - lo[static_cast<size_t>(a)]));
  }

  // keep every blob inside |x| <= 0.65 half so a two-cell margin of exact
  // zeros survives on the coarsest grids used in the experiments
  std::vector<SymTensor> dirs;
  std::vector<std::vector<double>> centers;
  std::vector<double> radii;
  for (int b = 0; b < blobs; ++b) {
    dirs.push_back(random_tensor(n, rank, rng));
    std::vector<double> c(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) c[static_cast<size_t>(a)] = center[static_cast<size_t>(a)] + 0.15 * half * u(rng);
    centers.push_back(std::move(c));
    radii.push_back((0.35 + 0.15 * std::abs(u(rng))) * half);
  }

  TensorField f = make_field(grid, rank, [&](std::span<const double> x) {
    SymTensor t(n, rank);
    for (int b = 0; b < blobs; ++b) {
      const double w = ball_bump(x, centers[static_cast<size_t>(b)], radii[static_cast<size_t>(b)]);
      if (w != 0.0) t += dirs[static_cast<size_t>(b)] * cplx(w);
    }
    return t;
  });
  if (normalize) {
    const double nn = l2_norm(f);
    if (nn > 0.0) f *= cplx(1.0 / nn);
  }
  return f;
}

TensorField random_trace_free_field(const GridDomain& grid, int rank, std::uint64_t seed,
                                    int blobs, bool normalize) {
  TensorField f = random_smooth_field(grid, rank, seed, blobs, false);
  f = field_project_trace_free(f);
  if (normalize) {
    const double nn = l2_norm(f);
    if (nn > 0.0) f *= cplx(1.0 / nn);
  }
  return f;
}

TensorField trace_free_bump_field(const GridDomain& grid, std::uint64_t seed) {
  const int n = grid.dim();
  std::mt19937_64 rng(seed);
  SymTensor dir = project_trace_free(random_tensor(n, 2, rng));
  const double dn = norm(dir);
  if (dn > 0.0) dir *= cplx(1.0 / dn);
  const auto lo = grid.box_min();
  const auto hi = grid.box_max();
  std::vector<double> center(static_cast<size_t>(n));
  double half = 1e300;
  for (int a = 0; a < n; ++a) {
    center[static_cast<size_t>(a)] = 0.5 * (lo[static_cast<size_t>(a)] + hi[static_cast<size_t>(a)]);
    half = std::min(half, 0.5 * (hi[static_cast<size_t>(a)] - lo[static_cast<size_t>(a)]));
  }
  const double radius = 0.7 * half;
  return make_field(grid, 2, [&](std::span<const double> x) {
    return dir * cplx(ball_bump(x, center, radius));
  });
}

TensorField divergence_free_phantom(const GridDomain& grid, int m) {
  const int n = grid.dim();
  if (n < 2) throw validation_error("divergence_free_phantom: needs n >= 2");
  const TensorField psi = scalar_bump_field(grid);
  const TensorField dpsi = sym_derivative(psi);
  TensorField w(grid, 1);
  // rotated gradient: (d_2 psi, -d_1 psi, 0, ...)
  const std::int64_t npts = grid.num_points();
  for (std::int64_t p = 0; p < npts; ++p) {
    w.at(0, p) = dpsi.at(1, p);
    w.at(1, p) = -dpsi.at(0, p);
  }
  return sym_derivative_pow(std::move(w), 2 * m - 2);
}

Polynomial zero_jet_bump_poly(int n, int m, double half_width) {
  Polynomial out = Polynomial::constant(n, 1.0);
  const double h2 = half_width * half_width;
  for (int a = 0; a < n; ++a) {
    Polynomial factor = Polynomial::constant(n, h2) - Polynomial::variable(n, a, 2);
    Polynomial pw = Polynomial::constant(n, 1.0);
    for (int k = 0; k < 2 * m; ++k) pw = pw * factor;
    out = out * pw;
  }
  out *= cplx(std::pow(half_width, -4.0 * m * n));
  return out;
}

}  // namespace mrt
