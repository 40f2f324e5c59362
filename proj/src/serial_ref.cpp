#include "mrt/serial_ref.hpp"

#include <cmath>

namespace mrt::serial {

namespace {

// Scalar derivative of one component at one grid point by direct indexing.
cplx point_derivative(const TensorField& f, std::int64_t comp, std::int64_t p, int axis, FaceRule rule) {
  const GridDomain& g = f.grid();
  const int na = g.dims()[static_cast<size_t>(axis)];
  const double h = g.spacing()[static_cast<size_t>(axis)];
  std::int64_t stride = 1;
  for (int a = g.dim() - 1; a > axis; --a) stride *= g.dims()[static_cast<size_t>(a)];
  const int i = static_cast<int>((p / stride) % na);
  if (rule == FaceRule::zero_extension) {
    const cplx fp = (i + 1 < na) ? f.at(comp, p + stride) : cplx(0.0);
    const cplx fm = (i - 1 >= 0) ? f.at(comp, p - stride) : cplx(0.0);
    return (fp - fm) / (2.0 * h);
  }
  if (i == 0) {
    return (-3.0 * f.at(comp, p) + 4.0 * f.at(comp, p + stride) - f.at(comp, p + 2 * stride)) / (2.0 * h);
  }
  if (i == na - 1) {
    return (3.0 * f.at(comp, p) - 4.0 * f.at(comp, p - stride) + f.at(comp, p - 2 * stride)) / (2.0 * h);
  }
  return (f.at(comp, p + stride) - f.at(comp, p - stride)) / (2.0 * h);
}

}  // namespace

cplx forward_Jk(const MixedField& F, const Ray& ray) {
  validate_mixed_field(F);
  const GridDomain& grid = F[0].grid();
  const int n = grid.dim();
  double nrm = 0.0;
  for (double v : ray.dir) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (nrm < 1e-14) throw validation_error("forward_Jk: zero direction");
  double t0, t1;
  if (!clip_ray_to_box(grid, ray, t0, t1) || t1 - t0 < 1e-14) return 0.0;

  const double dt_target = 0.5 * grid.min_spacing() / nrm;
  const int steps = std::max(2, static_cast<int>(std::ceil((t1 - t0) / dt_target)) + 1);
  const double dt = (t1 - t0) / (steps - 1);
  std::vector<cplx> xi(ray.dir.begin(), ray.dir.end());

  std::vector<double> x(static_cast<size_t>(n));
  cplx acc = 0.0;
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    for (int a = 0; a < n; ++a) x[static_cast<size_t>(a)] = ray.base[static_cast<size_t>(a)] + t * ray.dir[static_cast<size_t>(a)];
    cplx val = 0.0;
    for (size_t p = 0; p < F.size(); ++p) {
      SymTensor tp(n, static_cast<int>(p));
      for (std::int64_t c = 0; c < tp.size(); ++c) tp[c] = F[p].interpolate(c, x);
      val += contract_full(tp, xi);
    }
    double tk = 1.0;
    for (int i = 0; i < ray.k; ++i) tk *= t;
    acc += ((s == 0 || s == steps - 1) ? 0.5 : 1.0) * tk * val;
  }
  return acc * dt;
}

std::vector<cplx> transform_rays(const MixedField& F, const std::vector<Ray>& rays) {
  std::vector<cplx> out(rays.size());
  for (size_t i = 0; i < rays.size(); ++i) out[i] = mrt::serial::forward_Jk(F, rays[i]);
  return out;
}

TensorField sym_derivative(const TensorField& f, FaceRule rule) {
  const int n = f.dim();
  const int m = f.rank();
  TensorField out(f.grid(), m + 1);
  for_each_sym_index(n, m + 1, [&](std::span<const int> idx, std::int64_t pos) {
    const double mu_out = static_cast<double>(sym_multiplicity(idx));
    const int len = static_cast<int>(idx.size());
    for (std::int64_t p = 0; p < f.grid().num_points(); ++p) {
      cplx acc = 0.0;
      for (int t = 0; t < len; ++t) {
        if (t > 0 && idx[static_cast<size_t>(t)] == idx[static_cast<size_t>(t - 1)]) continue;
        const int c = idx[static_cast<size_t>(t)];
        std::vector<int> rest;
        rest.reserve(static_cast<size_t>(len - 1));
        bool dropped = false;
        for (int a : idx) {
          if (a == c && !dropped) {
            dropped = true;
            continue;
          }
          rest.push_back(a);
        }
        acc += static_cast<double>(sym_multiplicity(rest)) *
               point_derivative(f, sym_position(n, rest), p, c, rule);
      }
      out.at(pos, p) = acc / mu_out;
    }
  });
  return out;
}

TensorField divergence(const TensorField& f, FaceRule rule) {
  if (f.rank() == 0) throw validation_error("divergence: rank must be >= 1");
  const int n = f.dim();
  TensorField out(f.grid(), f.rank() - 1);
  for_each_sym_index(n, f.rank() - 1, [&](std::span<const int> idx, std::int64_t pos) {
    for (std::int64_t p = 0; p < f.grid().num_points(); ++p) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k) {
        std::vector<int> full(idx.begin(), idx.end());
        full.insert(std::lower_bound(full.begin(), full.end(), k), k);
        acc += point_derivative(f, sym_position(n, full), p, k, rule);
      }
      out.at(pos, p) = acc;
    }
  });
  return out;
}

}  // namespace mrt::serial
