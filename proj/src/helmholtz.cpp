#include "mrt/helmholtz.hpp"

#include <cmath>

namespace mrt {

namespace {

// Indices of grid points at distance >= margin from every face.
std::vector<std::int64_t> margin_interior(const GridDomain& g, int margin) {
  std::vector<std::int64_t> ids;
  std::vector<int> iv(static_cast<size_t>(g.dim()));
  for (std::int64_t p = 0; p < g.num_points(); ++p) {
    g.unflatten_into(p, iv);
    bool ok = true;
    for (int a = 0; a < g.dim(); ++a) {
      if (iv[static_cast<size_t>(a)] < margin || iv[static_cast<size_t>(a)] >= g.dims()[static_cast<size_t>(a)] - margin) {
        ok = false;
        break;
      }
    }
    if (ok) ids.push_back(p);
  }
  return ids;
}

TensorField unpack(const GridDomain& g, const std::vector<std::int64_t>& ids, std::span<const cplx> x) {
  TensorField f(g, 0);
  for (size_t i = 0; i < ids.size(); ++i) f.at(0, ids[i]) = x[i];
  return f;
}

std::vector<cplx> pack(const TensorField& f, const std::vector<std::int64_t>& ids) {
  std::vector<cplx> x(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) x[i] = f.at(0, ids[i]);
  return x;
}

double vec_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(s);
}

cplx vec_dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

}  // namespace

TensorField bvp_operator_apply(const TensorField& phi, int m) {
  TensorField g = sym_derivative_pow(phi, m, FaceRule::zero_extension);
  g = field_project_trace_free(g);
  g = divergence_pow(std::move(g), m, FaceRule::zero_extension);
  if (m % 2 != 0) g *= cplx(-1.0);
  return g;
}

DecompositionResult helmholtz_trace_free(const TensorField& f, double cg_tol, int iter_cap_factor) {
  const int m = f.rank();
  const int n = f.dim();
  if (m < 1 || m > 2) throw validation_error("helmholtz_trace_free: rank must be 1 or 2");
  const GridDomain& grid = f.grid();
  const auto ids = margin_interior(grid, m);
  if (ids.empty()) throw validation_error("helmholtz_trace_free: grid too small for the zero-jet margin");

  // rhs = (-1)^m delta^m p f restricted to the unknowns
  TensorField pf = field_project_trace_free(f);
  TensorField rhs_field = divergence_pow(pf, m, FaceRule::zero_extension);
  if (m % 2 != 0) rhs_field *= cplx(-1.0);
  std::vector<cplx> b = pack(rhs_field, ids);

  const auto apply = [&](std::span<const cplx> x) {
    const TensorField xf = unpack(grid, ids, x);
    const TensorField ax = bvp_operator_apply(xf, m);
    return pack(ax, ids);
  };

  // plain CG on the SPD operator
  const size_t nunk = ids.size();
  std::vector<cplx> x(nunk, cplx(0.0));
  std::vector<cplx> r = b;
  std::vector<cplx> p = r;
  const double bnorm = vec_norm(b);
  const int cap = iter_cap_factor * static_cast<int>(nunk);
  int it = 0;
  double relres = (bnorm == 0.0) ? 0.0 : 1.0;
  if (bnorm > 0.0) {
    double rr = vec_dot(r, r).real();
    for (; it < cap; ++it) {
      if (std::sqrt(rr) / bnorm <= cg_tol) break;
      const auto ap = apply(p);
      const double pap = vec_dot(ap, p).real();
      if (pap <= 0.0) {
        throw numeric_guard_error("helmholtz_trace_free: CG broke down (operator not positive on iterate)");
      }
      const double alpha = rr / pap;
      for (size_t i = 0; i < nunk; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      const double rr_new = vec_dot(r, r).real();
      const double beta = rr_new / rr;
      for (size_t i = 0; i < nunk; ++i) p[i] = r[i] + beta * p[i];
      rr = rr_new;
    }
    relres = std::sqrt(vec_dot(r, r).real()) / bnorm;
    if (relres > cg_tol * 10.0 && it >= cap) {
      throw numeric_guard_error("helmholtz_trace_free: CG did not converge within the iteration cap");
    }
  }

  DecompositionResult out;
  out.cg_iterations = it;
  out.cg_rel_residual = relres;
  out.phi = unpack(grid, ids, x);

  const TensorField dmphi = sym_derivative_pow(out.phi, m, FaceRule::zero_extension);
  TensorField remainder = f - dmphi;

  if (m >= 2) {
    // v = (j_d i_d)^{-1} (j_d f - j_d d^m phi) pointwise
    const PointwiseMap inv = map_jdelta_idelta_inverse(n, m - 2);
    TensorField jrem = field_j_delta(remainder);
    out.v = apply_pointwise(inv, jrem, m - 2);
  }

  // f_tilde = p(f - d^m phi)
  out.f_tilde = field_project_trace_free(remainder);

  const double fn = l2_norm(f);
  TensorField reass = out.f_tilde;
  if (out.v.has_value()) reass += field_i_delta(*out.v);
  reass += dmphi;
  reass -= f;
  out.reassembly_rel = fn > 0 ? l2_norm(reass) / fn : l2_norm(reass);
  out.jdelta_ftilde = max_abs(field_j_delta(out.f_tilde));
  // delta^m f_tilde vanishes where the BVP row set lives; the pinned zero-jet
  // collar (width m) is the discrete boundary and is excluded from the norm.
  out.div_m_ftilde_rel =
      fn > 0 ? l2_norm_interior(divergence_pow(out.f_tilde, m, FaceRule::zero_extension), m) / fn
             : 0.0;

  // diagnostic: projection of phi onto polynomials of degree < m
  {
    std::vector<TensorField> basis;
    basis.push_back(make_field(grid, 0, [&](std::span<const double>) { return SymTensor::scalar(n, 1.0); }));
    if (m >= 2) {
      for (int a = 0; a < n; ++a) {
        basis.push_back(make_field(grid, 0, [&](std::span<const double> xx) {
          return SymTensor::scalar(n, xx[static_cast<size_t>(a)]);
        }));
      }
    }
    double proj = 0.0;
    const double pn = l2_norm(out.phi);
    for (const auto& e : basis) {
      const double en = l2_norm(e);
      if (en == 0.0 || pn == 0.0) continue;
      proj = std::max(proj, std::abs(field_inner(out.phi, e)) / (en * pn));
    }
    out.phi_lowdeg_projection = proj;
  }
  return out;
}

std::vector<std::pair<std::string, double>> DecompositionResult::as_metrics() const {
  return {
      {"reassembly_rel", reassembly_rel},
      {"jdelta_ftilde_max", jdelta_ftilde},
      {"div_m_ftilde_rel", div_m_ftilde_rel},
      {"cg_rel_residual", cg_rel_residual},
      {"cg_iterations", static_cast<double>(cg_iterations)},
      {"phi_lowdeg_projection", phi_lowdeg_projection},
  };
}

double symbol_rayleigh(std::span<const double> xi, int m, int n) {
  double nrm = 0.0;
  for (double v : xi) nrm += v * v;
  if (nrm == 0.0) throw validation_error("symbol_rayleigh: xi must be nonzero");
  std::vector<cplx> xc(xi.begin(), xi.end());
  SymTensor t = SymTensor::scalar(n, 1.0);
  for (int i = 0; i < m; ++i) t = i_vec(t, std::span<const cplx>(xc));
  const SymTensor pt = project_trace_free(t);
  return inner(pt, pt).real();
}

std::pair<double, double> symbol_identity_sides(const SymTensor& f, std::span<const double> xi) {
  const int m = f.rank();
  const int n = f.dim();
  std::vector<cplx> xc(xi.begin(), xi.end());
  double xi2 = 0.0;
  for (double v : xi) xi2 += v * v;

  const SymTensor pif = project_trace_free(i_vec(f, std::span<const cplx>(xc)));
  const double lhs = (m + 1) * inner(pif, pif).real();

  const SymTensor jf = j_vec(f, std::span<const cplx>(xc));
  const double f2 = inner(f, f).real();
  const double jf2 = inner(jf, jf).real();
  const double rhs = xi2 * f2 + m * (1.0 - 2.0 / (n + 2 * m - 2)) * jf2;
  return {lhs, rhs};
}

}  // namespace mrt
