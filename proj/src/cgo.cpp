#include "mrt/cgo.hpp"

#include <cmath>

namespace mrt {

std::vector<double> Frame::to_frame(std::span<const double> x) const {
  std::vector<double> y(static_cast<size_t>(n), 0.0);
  for (int r = 0; r < n; ++r) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += axes[static_cast<size_t>(r)][static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
    y[static_cast<size_t>(r)] = s;
  }
  return y;
}

Frame make_frame(std::span<const double> eta) {
  const int n = static_cast<int>(eta.size());
  if (n < 2) throw validation_error("frame: dimension must be >= 2");
  double nrm = 0.0, dot1 = 0.0;
  for (int j = 0; j < n; ++j) {
    nrm += eta[static_cast<size_t>(j)] * eta[static_cast<size_t>(j)];
    dot1 += (j == 0 ? 1.0 : 0.0) * eta[static_cast<size_t>(j)];
  }
  if (std::abs(std::sqrt(nrm) - 1.0) > 1e-12) throw validation_error("frame: eta must be a unit vector");
  if (std::abs(dot1) > 1e-12) throw validation_error("frame: eta must be orthogonal to e_1");

  Frame f;
  f.n = n;
  f.axes.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
  f.axes[0][0] = 1.0;
  for (int j = 0; j < n; ++j) f.axes[1][static_cast<size_t>(j)] = eta[static_cast<size_t>(j)];
  // Complete with Gram-Schmidt over the coordinate basis.
  int row = 2;
  for (int cand = 0; cand < n && row < n; ++cand) {
    std::vector<double> v(static_cast<size_t>(n), 0.0);
    v[static_cast<size_t>(cand)] = 1.0;
    for (int r = 0; r < row; ++r) {
      double d = 0.0;
      for (int j = 0; j < n; ++j) d += f.axes[static_cast<size_t>(r)][static_cast<size_t>(j)] * v[static_cast<size_t>(j)];
      for (int j = 0; j < n; ++j) v[static_cast<size_t>(j)] -= d * f.axes[static_cast<size_t>(r)][static_cast<size_t>(j)];
    }
    double vn = 0.0;
    for (double c : v) vn += c * c;
    vn = std::sqrt(vn);
    if (vn < 1e-8) continue;
    for (int j = 0; j < n; ++j) f.axes[static_cast<size_t>(row)][static_cast<size_t>(j)] = v[static_cast<size_t>(j)] / vn;
    ++row;
  }
  if (row != n) throw numeric_guard_error("frame: failed to complete orthonormal basis");
  return f;
}

std::vector<cplx> CgoParams::zeta() const {
  std::vector<cplx> z(eta.size());
  for (size_t j = 0; j < eta.size(); ++j) z[j] = cplx(j == 0 ? 1.0 : 0.0, eta[j]);
  return z;
}

CgoParams make_cgo_params(int n, double h, std::span<const double> eta) {
  if (h <= 0.0) throw validation_error("cgo: h must be positive");
  if (static_cast<int>(eta.size()) != n) throw validation_error("cgo: eta dimension mismatch");
  CgoParams p;
  p.h = h;
  p.eta.assign(eta.begin(), eta.end());
  p.frame = make_frame(eta);
  return p;
}

PolyDiffOp transport_op(int n) {
  PolyDiffOp t = PolyDiffOp::partial(n, 0) * cplx(2.0);
  t += PolyDiffOp::partial(n, 1) * cplx(0.0, 2.0);
  return t;
}

Polynomial transport_apply(const Polynomial& a, int power) {
  Polynomial out = a;
  for (int k = 0; k < power; ++k) {
    out = out.derivative(0) * cplx(2.0) + out.derivative(1) * cplx(0.0, 2.0);
  }
  return out;
}

Polynomial dzbar_apply(const Polynomial& a, int power) {
  Polynomial out = a;
  for (int k = 0; k < power; ++k) {
    out = out.derivative(0) * cplx(0.5) + out.derivative(1) * cplx(0.0, 0.5);
  }
  return out;
}

Polynomial z_poly(int n) {
  return Polynomial::variable(n, 0) + Polynomial::variable(n, 1) * cplx(0.0, 1.0);
}

Polynomial zbar_poly(int n) {
  return Polynomial::variable(n, 0) - Polynomial::variable(n, 1) * cplx(0.0, 1.0);
}

Polynomial poly_analytic_term(int n, int k, std::span<const cplx> f_coeffs) {
  const Polynomial z = z_poly(n);
  Polynomial f = Polynomial(n);
  Polynomial zp = Polynomial::constant(n, 1.0);
  for (size_t d = 0; d < f_coeffs.size(); ++d) {
    f += zp * f_coeffs[d];
    zp = zp * z;
  }
  Polynomial diff = z - zbar_poly(n);
  Polynomial out = f;
  for (int i = 0; i < k; ++i) out = out * diff;
  return out;
}

std::pair<TensorField, TensorField> cgo_pair(const CgoParams& params, int m,
                                             const Polynomial& a0, const Polynomial& b0,
                                             const GridDomain& grid) {
  if (!transport_apply(a0, m).is_zero() || !transport_apply(b0, m).is_zero()) {
    throw validation_error("cgo_pair: amplitudes must satisfy T^m a = 0");
  }
  const int n = grid.dim();
  const auto zeta = params.zeta();
  TensorField u(grid, 0);
  TensorField v(grid, 0);
  const std::int64_t npts = grid.num_points();
  std::vector<int> iv(static_cast<size_t>(n));
  for (std::int64_t p = 0; p < npts; ++p) {
    grid.unflatten_into(p, iv);
    const auto x = grid.point(iv);
    const auto y = params.frame.to_frame(x);
    cplx phase = 0.0;
    for (int j = 0; j < n; ++j) phase += zeta[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
    phase /= params.h;
    const cplx ex = std::exp(phase);
    u.at(0, p) = ex * a0.eval(std::span<const double>(y));
    v.at(0, p) = b0.eval(std::span<const double>(y)) / ex;
  }
  return {std::move(u), std::move(v)};
}

double cgo_residual_sup(const CgoParams& params, int m, const Polynomial& a0,
                        const GridDomain& grid) {
  const int n = grid.dim();
  PolyDiffOp op = transport_op(n) * cplx(-1.0 / params.h);
  op -= PolyDiffOp::laplacian(n);
  const Polynomial res = op_apply(op_pow(op, m), a0);
  double sup = 0.0;
  std::vector<int> iv(static_cast<size_t>(n));
  for (std::int64_t p = 0; p < grid.num_points(); ++p) {
    grid.unflatten_into(p, iv);
    const auto y = params.frame.to_frame(grid.point(iv));
    sup = std::max(sup, std::abs(res.eval(std::span<const double>(y))));
  }
  return sup;
}

}  // namespace mrt
