#include "mrt/ray_transform.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mrt/cgo.hpp"

namespace mrt {

namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double dir_norm(std::span<const double> d) {
  double s = 0.0;
  for (double v : d) s += v * v;
  return std::sqrt(s);
}

// Per-rank contraction weights mult(idx) * xi^idx over compressed components.
std::vector<std::vector<double>> xi_weights(int n, int m, std::span<const double> xi) {
  std::vector<std::vector<double>> w(static_cast<size_t>(m + 1));
  for (int p = 0; p <= m; ++p) {
    w[static_cast<size_t>(p)].resize(static_cast<size_t>(sym_component_count(n, p)));
    for_each_sym_index(n, p, [&](std::span<const int> idx, std::int64_t pos) {
      double v = static_cast<double>(sym_multiplicity(idx));
      for (int a : idx) v *= xi[static_cast<size_t>(a)];
      w[static_cast<size_t>(p)][static_cast<size_t>(pos)] = v;
    });
  }
  return w;
}

}  // namespace

void validate_mixed_field(const MixedField& F) {
  if (F.empty()) throw validation_error("mixed field: no parts");
  for (size_t p = 0; p < F.size(); ++p) {
    if (F[p].rank() != static_cast<int>(p)) throw validation_error("mixed field: parts must have ranks 0..m");
    if (!F[p].grid().same_as(F[0].grid())) throw validation_error("mixed field: parts on different grids");
  }
}

bool clip_ray_to_box(const GridDomain& grid, const Ray& ray, double& t0, double& t1) {
  const auto lo = grid.box_min();
  const auto hi = grid.box_max();
  t0 = -1e300;
  t1 = 1e300;
  for (int a = 0; a < grid.dim(); ++a) {
    const double d = ray.dir[static_cast<size_t>(a)];
    const double b = ray.base[static_cast<size_t>(a)];
    if (std::abs(d) < 1e-14) {
      if (b < lo[static_cast<size_t>(a)] || b > hi[static_cast<size_t>(a)]) return false;
      continue;
    }
    double ta = (lo[static_cast<size_t>(a)] - b) / d;
    double tb = (hi[static_cast<size_t>(a)] - b) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return t0 <= t1;
}

cplx forward_Jk(const MixedField& F, const Ray& ray) {
  validate_mixed_field(F);
  const GridDomain& grid = F[0].grid();
  const int n = grid.dim();
  if (static_cast<int>(ray.base.size()) != n || static_cast<int>(ray.dir.size()) != n) {
    throw validation_error("forward_Jk: ray dimension mismatch");
  }
  const double nrm = dir_norm(ray.dir);
  if (nrm < 1e-14) throw validation_error("forward_Jk: zero direction");
  double t0, t1;
  if (!clip_ray_to_box(grid, ray, t0, t1)) return 0.0;
  if (t1 - t0 < 1e-14) return 0.0;

  const int m = static_cast<int>(F.size()) - 1;
  const auto w = xi_weights(n, m, ray.dir);

  const double dt_target = 0.5 * grid.min_spacing() / nrm;
  const int steps = std::max(2, static_cast<int>(std::ceil((t1 - t0) / dt_target)) + 1);
  const double dt = (t1 - t0) / (steps - 1);

  std::vector<double> x(static_cast<size_t>(n));
  cplx acc = 0.0;
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    for (int a = 0; a < n; ++a) x[static_cast<size_t>(a)] = ray.base[static_cast<size_t>(a)] + t * ray.dir[static_cast<size_t>(a)];
    cplx val = 0.0;
    for (int p = 0; p <= m; ++p) {
      const auto& wp = w[static_cast<size_t>(p)];
      for (std::int64_t c = 0; c < static_cast<std::int64_t>(wp.size()); ++c) {
        if (wp[static_cast<size_t>(c)] == 0.0) continue;
        val += wp[static_cast<size_t>(c)] * F[static_cast<size_t>(p)].interpolate(c, x);
      }
    }
    double tk = 1.0;
    for (int i = 0; i < ray.k; ++i) tk *= t;
    const double trap = (s == 0 || s == steps - 1) ? 0.5 : 1.0;
    acc += trap * tk * val;
  }
  return acc * dt;
}

std::vector<cplx> transform_rays(const MixedField& F, const std::vector<Ray>& rays) {
  validate_mixed_field(F);
  std::vector<cplx> out(rays.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(rays.size()); ++i) {
    out[static_cast<size_t>(i)] = forward_Jk(F, rays[static_cast<size_t>(i)]);
  }
  return out;
}

std::vector<Ray> make_ray_set(const GridDomain& grid, int count, int k, std::uint64_t seed) {
  const int n = grid.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto lo = grid.box_min();
  const auto hi = grid.box_max();
  std::vector<double> center(static_cast<size_t>(n));
  double radius = 0.0;
  for (int a = 0; a < n; ++a) {
    center[static_cast<size_t>(a)] = 0.5 * (lo[static_cast<size_t>(a)] + hi[static_cast<size_t>(a)]);
    radius = std::max(radius, 0.5 * (hi[static_cast<size_t>(a)] - lo[static_cast<size_t>(a)]));
  }

  std::vector<Ray> rays;
  rays.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    Ray r;
    r.k = k;
    r.dir.assign(static_cast<size_t>(n), 0.0);
    if (n == 2) {
      const double th = kTwoPi * std::fmod(kGolden * i + unit(rng) * 1e-3, 1.0);
      r.dir[0] = std::cos(th);
      r.dir[1] = std::sin(th);
    } else if (n == 3) {
      // Fibonacci sphere with a small seeded jitter.
      const double zc = std::clamp(1.0 - 2.0 * ((i + 0.5) / count) + unit(rng) * 1e-3, -1.0, 1.0);
      const double th = kTwoPi * std::fmod(kGolden * i, 1.0);
      const double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      r.dir[0] = rho * std::cos(th);
      r.dir[1] = rho * std::sin(th);
      r.dir[2] = zc;
    } else {
      double nrm = 0.0;
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (int a = 0; a < n; ++a) {
        r.dir[static_cast<size_t>(a)] = gauss(rng);
        nrm += r.dir[static_cast<size_t>(a)] * r.dir[static_cast<size_t>(a)];
      }
      nrm = std::sqrt(nrm);
      for (auto& v : r.dir) v /= nrm;
    }
    // Random base point in the box: the lateral part picks the line, the
    // longitudinal part varies the origin of the momentum weight t^k.
    r.base = center;
    for (int a = 0; a < n; ++a) {
      r.base[static_cast<size_t>(a)] += unit(rng) * 0.7 * radius;
    }
    rays.push_back(std::move(r));
  }
  return rays;
}

cplx axis_moment_transform(const TensorField& f, std::span<const double> eta,
                           std::span<const double> x_rest, int alpha) {
  const GridDomain& grid = f.grid();
  const int n = grid.dim();
  const int m = f.rank();
  if (alpha > m) throw validation_error("axis_moment_transform: weight power must be <= rank");
  if (static_cast<int>(eta.size()) != n) throw validation_error("axis_moment_transform: eta dimension mismatch");
  double nrm = 0.0;
  for (double v : eta) nrm += v * v;
  if (std::abs(std::sqrt(nrm) - 1.0) > 1e-10) throw validation_error("axis_moment_transform: eta must be unit");
  if (std::abs(eta[0]) > 1e-10) throw validation_error("axis_moment_transform: eta must be orthogonal to e_1");
  if (static_cast<int>(x_rest.size()) != n - 2) throw validation_error("axis_moment_transform: need n-2 rest coordinates");

  // Orthonormal frame {e_1, eta, w_3..}; the integration line is
  // x(s) = s eta + sum_j x_rest[j] w_{j+2}, lying in the plane x_1 = 0.
  std::vector<double> eta_v(eta.begin(), eta.end());
  const Frame frame = make_frame(eta_v);

  Ray line;
  line.k = alpha;
  line.dir = eta_v;
  line.base.assign(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n - 2; ++j) {
    for (int a = 0; a < n; ++a) {
      line.base[static_cast<size_t>(a)] += x_rest[static_cast<size_t>(j)] * frame.axes[static_cast<size_t>(j + 2)][static_cast<size_t>(a)];
    }
  }

  double t0, t1;
  if (!clip_ray_to_box(grid, line, t0, t1)) return 0.0;
  if (t1 - t0 < 1e-14) return 0.0;

  // Complex contraction weights mult(idx) * zeta^idx with zeta = e_1 + i eta.
  std::vector<cplx> zeta(static_cast<size_t>(n));
  for (int a = 0; a < n; ++a) zeta[static_cast<size_t>(a)] = cplx(a == 0 ? 1.0 : 0.0, eta[static_cast<size_t>(a)]);
  std::vector<cplx> w(static_cast<size_t>(sym_component_count(n, m)));
  for_each_sym_index(n, m, [&](std::span<const int> idx, std::int64_t pos) {
    cplx v = static_cast<double>(sym_multiplicity(idx));
    for (int a : idx) v *= zeta[static_cast<size_t>(a)];
    w[static_cast<size_t>(pos)] = v;
  });

  const double dt = 0.5 * grid.min_spacing();
  const int steps = std::max(2, static_cast<int>(std::ceil((t1 - t0) / dt)) + 1);
  const double step = (t1 - t0) / (steps - 1);
  std::vector<double> x(static_cast<size_t>(n));
  cplx acc = 0.0;
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * step;
    for (int a = 0; a < n; ++a) x[static_cast<size_t>(a)] = line.base[static_cast<size_t>(a)] + t * eta[static_cast<size_t>(a)];
    cplx val = 0.0;
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(w.size()); ++c) {
      if (w[static_cast<size_t>(c)] == cplx(0.0)) continue;
      val += w[static_cast<size_t>(c)] * f.interpolate(c, x);
    }
    double sw = 1.0;
    for (int i = 0; i < alpha; ++i) sw *= t;
    acc += ((s == 0 || s == steps - 1) ? 0.5 : 1.0) * sw * val;
  }
  return acc * step;
}

ImMatrix build_Im_matrix(const GridDomain& grid, int m, const std::vector<Ray>& rays) {
  const int n = grid.dim();
  ImMatrix mat;
  mat.max_rank = m;
  // Interior points: one-cell margin.
  std::vector<std::int64_t> ordinal(static_cast<size_t>(grid.num_points()), -1);
  std::vector<int> iv(static_cast<size_t>(n));
  for (std::int64_t p = 0; p < grid.num_points(); ++p) {
    grid.unflatten_into(p, iv);
    bool interior = true;
    for (int a = 0; a < n; ++a) {
      if (iv[static_cast<size_t>(a)] == 0 || iv[static_cast<size_t>(a)] == grid.dims()[static_cast<size_t>(a)] - 1) {
        interior = false;
        break;
      }
    }
    if (interior) {
      ordinal[static_cast<size_t>(p)] = static_cast<std::int64_t>(mat.interior_points.size());
      mat.interior_points.push_back(p);
    }
  }
  const std::int64_t n_int = static_cast<std::int64_t>(mat.interior_points.size());
  mat.rank_offsets.assign(static_cast<size_t>(m + 2), 0);
  std::int64_t cols = 0;
  for (int p = 0; p <= m; ++p) {
    mat.rank_offsets[static_cast<size_t>(p)] = cols;
    cols += sym_component_count(n, p) * n_int;
  }
  mat.rank_offsets[static_cast<size_t>(m + 1)] = cols;
  mat.cols = cols;
  mat.rows = static_cast<std::int64_t>(rays.size());
  if (mat.rows * mat.cols > 10'000'000) throw numeric_guard_error("build_Im_matrix: entry-count guard exceeded");
  mat.a.assign(static_cast<size_t>(mat.rows * mat.cols), 0.0);

#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t r = 0; r < mat.rows; ++r) {
    const Ray& ray = rays[static_cast<size_t>(r)];
    const double nrm = dir_norm(ray.dir);
    if (nrm < 1e-14) continue;
    double t0, t1;
    if (!clip_ray_to_box(grid, ray, t0, t1) || t1 - t0 < 1e-14) continue;
    const auto w = xi_weights(n, m, ray.dir);
    const double dt_target = 0.5 * grid.min_spacing() / nrm;
    const int steps = std::max(2, static_cast<int>(std::ceil((t1 - t0) / dt_target)) + 1);
    const double dt = (t1 - t0) / (steps - 1);
    double* row = mat.a.data() + r * mat.cols;

    std::vector<double> x(static_cast<size_t>(n));
    std::vector<double> frac(static_cast<size_t>(n));
    std::vector<int> base(static_cast<size_t>(n));
    std::vector<int> corner(static_cast<size_t>(n));
    for (int s = 0; s < steps; ++s) {
      const double t = t0 + s * dt;
      bool inside = true;
      for (int a = 0; a < n; ++a) {
        x[static_cast<size_t>(a)] = ray.base[static_cast<size_t>(a)] + t * ray.dir[static_cast<size_t>(a)];
        const double u = (x[static_cast<size_t>(a)] - grid.origin()[static_cast<size_t>(a)]) / grid.spacing()[static_cast<size_t>(a)];
        if (u < 0.0 || u > grid.dims()[static_cast<size_t>(a)] - 1) {
          inside = false;
          break;
        }
        int i0 = static_cast<int>(u);
        if (i0 >= grid.dims()[static_cast<size_t>(a)] - 1) i0 = grid.dims()[static_cast<size_t>(a)] - 2;
        base[static_cast<size_t>(a)] = i0;
        frac[static_cast<size_t>(a)] = u - i0;
      }
      if (!inside) continue;
      double tk = 1.0;
      for (int i = 0; i < ray.k; ++i) tk *= t;
      const double scale = tk * dt * ((s == 0 || s == steps - 1) ? 0.5 : 1.0);
      for (int cbits = 0; cbits < (1 << n); ++cbits) {
        double cw = 1.0;
        for (int a = 0; a < n; ++a) {
          const int bit = (cbits >> a) & 1;
          corner[static_cast<size_t>(a)] = base[static_cast<size_t>(a)] + bit;
          cw *= bit ? frac[static_cast<size_t>(a)] : 1.0 - frac[static_cast<size_t>(a)];
        }
        if (cw == 0.0) continue;
        const std::int64_t pid = grid.flatten(corner);
        const std::int64_t ord = ordinal[static_cast<size_t>(pid)];
        if (ord < 0) continue;  // boundary values are fixed to zero
        for (int p = 0; p <= m; ++p) {
          const auto& wp = w[static_cast<size_t>(p)];
          const std::int64_t off = mat.rank_offsets[static_cast<size_t>(p)];
          for (std::int64_t c = 0; c < static_cast<std::int64_t>(wp.size()); ++c) {
            row[off + c * n_int + ord] += scale * cw * wp[static_cast<size_t>(c)];
          }
        }
      }
    }
  }
  return mat;
}

std::vector<cplx> pack_mixed_field(const ImMatrix& mat, const MixedField& F) {
  validate_mixed_field(F);
  if (static_cast<int>(F.size()) - 1 != mat.max_rank) throw validation_error("pack_mixed_field: rank mismatch");
  std::vector<cplx> v(static_cast<size_t>(mat.cols));
  const std::int64_t n_int = static_cast<std::int64_t>(mat.interior_points.size());
  for (int p = 0; p <= mat.max_rank; ++p) {
    const std::int64_t off = mat.rank_offsets[static_cast<size_t>(p)];
    for (std::int64_t c = 0; c < F[static_cast<size_t>(p)].num_components(); ++c) {
      for (std::int64_t i = 0; i < n_int; ++i) {
        v[static_cast<size_t>(off + c * n_int + i)] =
            F[static_cast<size_t>(p)].at(c, mat.interior_points[static_cast<size_t>(i)]);
      }
    }
  }
  return v;
}

std::vector<cplx> im_matrix_apply(const ImMatrix& mat, const MixedField& F) {
  const auto v = pack_mixed_field(mat, F);
  std::vector<cplx> out(static_cast<size_t>(mat.rows));
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < mat.rows; ++r) {
    cplx acc = 0.0;
    const double* row = mat.a.data() + r * mat.cols;
    for (std::int64_t c = 0; c < mat.cols; ++c) acc += row[c] * v[static_cast<size_t>(c)];
    out[static_cast<size_t>(r)] = acc;
  }
  return out;
}

}  // namespace mrt
