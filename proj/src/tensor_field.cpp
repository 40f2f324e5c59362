#include "mrt/tensor_field.hpp"

#include <cmath>

namespace mrt {

namespace {

// d/dx of one component plane along one axis, second order.
void axis_derivative(const GridDomain& g, std::span<const cplx> in, std::span<cplx> out,
                     int axis, FaceRule rule) {
  const auto& dims = g.dims();
  const int na = dims[static_cast<size_t>(axis)];
  const double h = g.spacing()[static_cast<size_t>(axis)];
  std::int64_t stride = 1;
  for (int a = g.dim() - 1; a > axis; --a) stride *= dims[static_cast<size_t>(a)];
  const std::int64_t npts = g.num_points();

#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < npts; ++p) {
    const int i = static_cast<int>((p / stride) % na);
    cplx v;
    if (rule == FaceRule::zero_extension) {
      const cplx fp = (i + 1 < na) ? in[static_cast<size_t>(p + stride)] : cplx(0.0);
      const cplx fm = (i - 1 >= 0) ? in[static_cast<size_t>(p - stride)] : cplx(0.0);
      v = (fp - fm) / (2.0 * h);
    } else if (i == 0) {
      v = (-3.0 * in[static_cast<size_t>(p)] + 4.0 * in[static_cast<size_t>(p + stride)] -
           in[static_cast<size_t>(p + 2 * stride)]) /
          (2.0 * h);
    } else if (i == na - 1) {
      v = (3.0 * in[static_cast<size_t>(p)] - 4.0 * in[static_cast<size_t>(p - stride)] +
           in[static_cast<size_t>(p - 2 * stride)]) /
          (2.0 * h);
    } else {
      v = (in[static_cast<size_t>(p + stride)] - in[static_cast<size_t>(p - stride)]) / (2.0 * h);
    }
    out[static_cast<size_t>(p)] = v;
  }
}

void require_stencil_room(const GridDomain& g) {
  for (int d : g.dims()) {
    if (d < 5) throw validation_error("derivative: grid needs at least 5 points per axis");
  }
}

// Fornberg finite-difference weights for derivative order m at z on nodes x.
std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x, int m) {
  const int nd = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(static_cast<size_t>(nd + 1), std::vector<double>(static_cast<size_t>(m + 1), 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= nd; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<size_t>(i)] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[static_cast<size_t>(i)][static_cast<size_t>(k)] =
              c1 * (k * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)] -
                    c5 * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k)]) /
              c2;
        }
        c[static_cast<size_t>(i)][0] = -c1 * c5 * c[static_cast<size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[static_cast<size_t>(j)][static_cast<size_t>(k)] =
            (c4 * c[static_cast<size_t>(j)][static_cast<size_t>(k)] -
             k * c[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]) /
            c3;
      }
      c[static_cast<size_t>(j)][0] = c4 * c[static_cast<size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  return c;
}

}  // namespace

TensorField::TensorField(GridDomain grid, int rank) : grid_(std::move(grid)), rank_(rank) {
  validate_rank_dim(grid_.dim(), rank);
  ncomp_ = sym_component_count(grid_.dim(), rank);
  data_.assign(static_cast<size_t>(ncomp_ * grid_.num_points()), cplx(0.0));
}

SymTensor TensorField::tensor_at(std::int64_t point) const {
  SymTensor t(grid_.dim(), rank_);
  for (std::int64_t c = 0; c < ncomp_; ++c) t[c] = at(c, point);
  return t;
}

void TensorField::set_tensor_at(std::int64_t point, const SymTensor& t) {
  for (std::int64_t c = 0; c < ncomp_; ++c) at(c, point) = t[c];
}

TensorField& TensorField::operator+=(const TensorField& o) {
  if (!grid_.same_as(o.grid_) || rank_ != o.rank_) throw validation_error("field shape mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

TensorField& TensorField::operator-=(const TensorField& o) {
  if (!grid_.same_as(o.grid_) || rank_ != o.rank_) throw validation_error("field shape mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

TensorField& TensorField::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

cplx TensorField::interpolate(std::int64_t comp, std::span<const double> x) const {
  const int n = grid_.dim();
  const auto& dims = grid_.dims();
  double frac[kMaxDim];
  int base[kMaxDim];
  for (int a = 0; a < n; ++a) {
    const double t = (x[static_cast<size_t>(a)] - grid_.origin()[static_cast<size_t>(a)]) /
                     grid_.spacing()[static_cast<size_t>(a)];
    if (t < 0.0 || t > dims[static_cast<size_t>(a)] - 1) return 0.0;
    int i0 = static_cast<int>(t);
    if (i0 >= dims[static_cast<size_t>(a)] - 1) i0 = dims[static_cast<size_t>(a)] - 2;
    base[a] = i0;
    frac[a] = t - i0;
  }
  std::span<const cplx> pl = plane(comp);
  cplx acc = 0.0;
  const int corners = 1 << n;
  int iv[kMaxDim];
  for (int cbits = 0; cbits < corners; ++cbits) {
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      const int bit = (cbits >> a) & 1;
      iv[a] = base[a] + bit;
      w *= bit ? frac[a] : (1.0 - frac[a]);
    }
    if (w == 0.0) continue;
    acc += w * pl[static_cast<size_t>(grid_.flatten(std::span<const int>(iv, static_cast<size_t>(n))))];
  }
  return acc;
}

TensorField make_field(const GridDomain& grid, int rank,
                       const std::function<SymTensor(std::span<const double>)>& sampler) {
  TensorField f(grid, rank);
  const std::int64_t npts = grid.num_points();
  std::vector<int> iv(static_cast<size_t>(grid.dim()));
  for (std::int64_t p = 0; p < npts; ++p) {
    grid.unflatten_into(p, iv);
    f.set_tensor_at(p, sampler(grid.point(iv)));
  }
  return f;
}

TensorField sym_derivative(const TensorField& f, FaceRule rule) {
  require_stencil_room(f.grid());
  const int n = f.dim();
  const int m = f.rank();
  const std::int64_t npts = f.grid().num_points();
  const std::int64_t nin = f.num_components();

  // All axis-derivatives of all input planes.
  std::vector<std::vector<cplx>> dpl(static_cast<size_t>(n * nin), std::vector<cplx>(static_cast<size_t>(npts)));
  for (int c = 0; c < n; ++c) {
    for (std::int64_t I = 0; I < nin; ++I) {
      axis_derivative(f.grid(), f.plane(I), dpl[static_cast<size_t>(c * nin + I)], c, rule);
    }
  }

  TensorField out(f.grid(), m + 1);
  for_each_sym_index(n, m + 1, [&](std::span<const int> idx, std::int64_t pos) {
    const double mu_out = static_cast<double>(sym_multiplicity(idx));
    std::span<cplx> dst = out.plane(pos);
    const int len = static_cast<int>(idx.size());
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
      const double w = static_cast<double>(sym_multiplicity(rest)) / mu_out;
      const auto& src = dpl[static_cast<size_t>(c * nin + sym_position(n, rest))];
#pragma omp parallel for schedule(static)
      for (std::int64_t p = 0; p < npts; ++p) dst[static_cast<size_t>(p)] += w * src[static_cast<size_t>(p)];
    }
  });
  return out;
}

TensorField divergence(const TensorField& f, FaceRule rule) {
  if (f.rank() == 0) throw validation_error("divergence: rank must be >= 1");
  require_stencil_room(f.grid());
  const int n = f.dim();
  const int m = f.rank();
  const std::int64_t npts = f.grid().num_points();

  TensorField out(f.grid(), m - 1);
  std::vector<cplx> tmp(static_cast<size_t>(npts));
  for_each_sym_index(n, m - 1, [&](std::span<const int> idx, std::int64_t pos) {
    std::span<cplx> dst = out.plane(pos);
    for (int k = 0; k < n; ++k) {
      std::vector<int> full(idx.begin(), idx.end());
      full.insert(std::lower_bound(full.begin(), full.end(), k), k);
      axis_derivative(f.grid(), f.plane(sym_position(n, full)), tmp, k, rule);
#pragma omp parallel for schedule(static)
      for (std::int64_t p = 0; p < npts; ++p) dst[static_cast<size_t>(p)] += tmp[static_cast<size_t>(p)];
    }
  });
  return out;
}

TensorField sym_derivative_pow(TensorField f, int k, FaceRule rule) {
  for (int i = 0; i < k; ++i) f = sym_derivative(f, rule);
  return f;
}

TensorField divergence_pow(TensorField f, int k, FaceRule rule) {
  for (int i = 0; i < k; ++i) f = divergence(f, rule);
  return f;
}

TensorField scalar_partial(const TensorField& u, std::span<const int> alpha, FaceRule rule) {
  if (u.rank() != 0) throw validation_error("scalar_partial: scalar field expected");
  if (static_cast<int>(alpha.size()) != u.dim()) throw validation_error("scalar_partial: bad exponent length");
  require_stencil_room(u.grid());
  TensorField cur = u;
  TensorField next(u.grid(), 0);
  for (int a = 0; a < u.dim(); ++a) {
    for (int k = 0; k < alpha[static_cast<size_t>(a)]; ++k) {
      axis_derivative(u.grid(), cur.plane(0), next.plane(0), a, rule);
      std::swap(cur, next);
    }
  }
  return cur;
}

TensorField apply_coeff_op(const std::vector<TensorField>& coeffs, const TensorField& u) {
  if (u.rank() != 0) throw validation_error("apply_coeff_op: scalar field expected");
  const int n = u.dim();
  const std::int64_t npts = u.grid().num_points();
  TensorField out(u.grid(), 0);
  std::vector<int> alpha(static_cast<size_t>(n));
  for (size_t l = 0; l < coeffs.size(); ++l) {
    const TensorField& a = coeffs[l];
    if (a.rank() != static_cast<int>(l)) throw validation_error("apply_coeff_op: coefficient ranks must be 0,1,...");
    if (!a.grid().same_as(u.grid())) throw validation_error("apply_coeff_op: grids differ");
    // D^idx = (1/i)^l d^idx
    cplx dfac = 1.0;
    for (size_t t = 0; t < l; ++t) dfac *= cplx(0.0, -1.0);
    for_each_sym_index(n, static_cast<int>(l), [&](std::span<const int> idx, std::int64_t pos) {
      std::fill(alpha.begin(), alpha.end(), 0);
      for (int ax : idx) alpha[static_cast<size_t>(ax)] += 1;
      const TensorField du = scalar_partial(u, alpha);
      const double mu = static_cast<double>(sym_multiplicity(idx));
      std::span<cplx> dst = out.plane(0);
      std::span<const cplx> ap = a.plane(pos);
      std::span<const cplx> dup = du.plane(0);
#pragma omp parallel for schedule(static)
      for (std::int64_t p = 0; p < npts; ++p) {
        dst[static_cast<size_t>(p)] += mu * dfac * ap[static_cast<size_t>(p)] * dup[static_cast<size_t>(p)];
      }
    });
  }
  return out;
}

TensorField apply_pointwise(const PointwiseMap& map, const TensorField& f, int rank_out) {
  const std::int64_t npts = f.grid().num_points();
  TensorField out(f.grid(), rank_out);
  if (map.cols != f.num_components() || map.rows != out.num_components()) {
    throw validation_error("apply_pointwise: map shape mismatch");
  }
  for (int r = 0; r < map.rows; ++r) {
    std::span<cplx> dst = out.plane(r);
    for (int c = 0; c < map.cols; ++c) {
      const cplx w = map.entry(r, c);
      if (w == cplx(0.0)) continue;
      std::span<const cplx> src = f.plane(c);
#pragma omp parallel for schedule(static)
      for (std::int64_t p = 0; p < npts; ++p) dst[static_cast<size_t>(p)] += w * src[static_cast<size_t>(p)];
    }
  }
  return out;
}

TensorField field_i_delta(const TensorField& f) {
  return apply_pointwise(map_i_delta(f.dim(), f.rank()), f, f.rank() + 2);
}

TensorField field_j_delta(const TensorField& f) {
  return apply_pointwise(map_j_delta(f.dim(), f.rank()), f, f.rank() >= 2 ? f.rank() - 2 : 0);
}

TensorField field_project_trace_free(const TensorField& f) {
  return apply_pointwise(map_projection(f.dim(), f.rank()), f, f.rank());
}

double l2_norm(const TensorField& f) {
  double vol = 1.0;
  for (double h : f.grid().spacing()) vol *= h;
  double s = 0.0;
  for_each_sym_index(f.dim(), f.rank(), [&](std::span<const int> idx, std::int64_t pos) {
    const double mu = static_cast<double>(sym_multiplicity(idx));
    std::span<const cplx> pl = f.plane(pos);
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (std::int64_t p = 0; p < f.grid().num_points(); ++p) acc += std::norm(pl[static_cast<size_t>(p)]);
    s += mu * acc;
  });
  return std::sqrt(s * vol);
}

double l2_norm_interior(const TensorField& f, int margin) {
  const GridDomain& g = f.grid();
  double vol = 1.0;
  for (double h : g.spacing()) vol *= h;
  double s = 0.0;
  std::vector<int> iv(static_cast<size_t>(g.dim()));
  for_each_sym_index(f.dim(), f.rank(), [&](std::span<const int> idx, std::int64_t pos) {
    const double mu = static_cast<double>(sym_multiplicity(idx));
    std::span<const cplx> pl = f.plane(pos);
    for (std::int64_t p = 0; p < g.num_points(); ++p) {
      g.unflatten_into(p, iv);
      bool in = true;
      for (int a = 0; a < g.dim(); ++a) {
        if (iv[static_cast<size_t>(a)] < margin ||
            iv[static_cast<size_t>(a)] >= g.dims()[static_cast<size_t>(a)] - margin) {
          in = false;
          break;
        }
      }
      if (in) s += mu * std::norm(pl[static_cast<size_t>(p)]);
    }
  });
  return std::sqrt(s * vol);
}

double max_abs(const TensorField& f) {
  double mx = 0.0;
  for (std::int64_t c = 0; c < f.num_components(); ++c) {
    for (const cplx& v : f.plane(c)) mx = std::max(mx, std::abs(v));
  }
  return mx;
}

cplx field_inner(const TensorField& f, const TensorField& g) {
  if (!f.grid().same_as(g.grid()) || f.rank() != g.rank()) throw validation_error("field_inner: shape mismatch");
  double vol = 1.0;
  for (double h : f.grid().spacing()) vol *= h;
  double sr = 0.0, si = 0.0;
  for_each_sym_index(f.dim(), f.rank(), [&](std::span<const int> idx, std::int64_t pos) {
    const double mu = static_cast<double>(sym_multiplicity(idx));
    std::span<const cplx> a = f.plane(pos);
    std::span<const cplx> b = g.plane(pos);
    double ar = 0.0, ai = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : ar, ai)
    for (std::int64_t p = 0; p < f.grid().num_points(); ++p) {
      const cplx v = a[static_cast<size_t>(p)] * std::conj(b[static_cast<size_t>(p)]);
      ar += v.real();
      ai += v.imag();
    }
    sr += mu * ar;
    si += mu * ai;
  });
  return cplx(sr, si) * vol;
}

cplx integrate_trapezoid(const TensorField& u) {
  if (u.rank() != 0) throw validation_error("integrate_trapezoid: scalar field expected");
  const GridDomain& g = u.grid();
  double vol = 1.0;
  for (double h : g.spacing()) vol *= h;
  const int n = g.dim();
  std::span<const cplx> pl = u.plane(0);
  double sr = 0.0, si = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : sr, si)
  for (std::int64_t p = 0; p < g.num_points(); ++p) {
    int iv[kMaxDim];
    g.unflatten_into(p, std::span<int>(iv, static_cast<size_t>(n)));
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      if (iv[a] == 0 || iv[a] == g.dims()[static_cast<size_t>(a)] - 1) w *= 0.5;
    }
    sr += w * pl[static_cast<size_t>(p)].real();
    si += w * pl[static_cast<size_t>(p)].imag();
  }
  return cplx(sr, si) * vol;
}

double boundary_jet_residual(const TensorField& f, int order) {
  const GridDomain& g = f.grid();
  const int n = g.dim();
  double worst = 0.0;
  for (int axis = 0; axis < n; ++axis) {
    const int na = g.dims()[static_cast<size_t>(axis)];
    const double h = g.spacing()[static_cast<size_t>(axis)];
    for (int r = 0; r <= order; ++r) {
      const int len = r + 2;
      if (na < len) throw validation_error("boundary_jet_residual: grid too small for requested order");
      std::vector<double> nodes(static_cast<size_t>(len));
      for (int k = 0; k < len; ++k) nodes[static_cast<size_t>(k)] = k * h;
      const auto wts = fd_weights(0.0, nodes, r);
      std::int64_t stride = 1;
      for (int a = n - 1; a > axis; --a) stride *= g.dims()[static_cast<size_t>(a)];
      for (std::int64_t c = 0; c < f.num_components(); ++c) {
        std::span<const cplx> pl = f.plane(c);
        for (std::int64_t p = 0; p < g.num_points(); ++p) {
          const int i = static_cast<int>((p / stride) % na);
          if (i != 0 && i != na - 1) continue;
          const std::int64_t step = (i == 0) ? stride : -stride;
          cplx acc = 0.0;
          for (int k = 0; k < len; ++k) {
            acc += wts[static_cast<size_t>(k)][static_cast<size_t>(r)] * pl[static_cast<size_t>(p + k * step)];
          }
          worst = std::max(worst, std::abs(acc));
        }
      }
    }
  }
  return worst;
}

}  // namespace mrt
