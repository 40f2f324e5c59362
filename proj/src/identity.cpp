#include "mrt/identity.hpp"

#include <cmath>

#include "mrt/tensor_ops.hpp"

namespace mrt {

double CoefficientSet::max_abs_all() const {
  double mx = 0.0;
  for (const auto& f : a) mx = std::max(mx, max_abs(f));
  return mx;
}

CoefficientSet zero_coefficients(const GridDomain& grid, int m) {
  CoefficientSet cs;
  cs.m = m;
  for (int l = 0; l < 2 * m; ++l) cs.a.emplace_back(grid, l);
  return cs;
}

CoefficientSet coefficient_set_from_operator(const PolyDiffOp& Q, int m, const GridDomain& grid) {
  if (Q.order() > 2 * m - 1) throw validation_error("coefficient_set_from_operator: operator order exceeds 2m-1");
  const int n = grid.dim();
  CoefficientSet cs = zero_coefficients(grid, m);
  std::vector<int> iv(static_cast<size_t>(n));
  for (int l = 0; l < 2 * m; ++l) {
    const auto polys = extract_coeff_tensor_polys(Q, l);
    // d^alpha = i^l D^alpha, so the D-convention tensor carries a factor i^l.
    cplx il = 1.0;
    for (int t = 0; t < l; ++t) il *= cplx(0.0, 1.0);
    TensorField& dst = cs.a[static_cast<size_t>(l)];
    bool any = false;
    for (const auto& p : polys) {
      if (!p.is_zero()) any = true;
    }
    if (!any) continue;
    for (std::int64_t pt = 0; pt < grid.num_points(); ++pt) {
      grid.unflatten_into(pt, iv);
      const auto x = grid.point(iv);
      for (std::int64_t c = 0; c < dst.num_components(); ++c) {
        dst.at(c, pt) = il * polys[static_cast<size_t>(c)].eval(std::span<const double>(x));
      }
    }
  }
  return cs;
}

IdentityReport integral_identity(const CoefficientSet& coeffs, const TensorField& u,
                                 const TensorField& v) {
  if (u.rank() != 0 || v.rank() != 0) throw validation_error("integral_identity: u, v must be scalar fields");
  const GridDomain& grid = u.grid();
  if (!grid.same_as(v.grid()) || !grid.same_as(coeffs.grid())) {
    throw validation_error("integral_identity: grids differ");
  }
  const int n = grid.dim();
  const std::int64_t npts = grid.num_points();

  TensorField acc(grid, 0);
  std::vector<double> absacc(static_cast<size_t>(npts), 0.0);
  std::vector<int> alpha(static_cast<size_t>(n));
  for (size_t l = 0; l < coeffs.a.size(); ++l) {
    const TensorField& al = coeffs.a[l];
    if (max_abs(al) == 0.0) continue;
    cplx dfac = 1.0;
    for (size_t t = 0; t < l; ++t) dfac *= cplx(0.0, -1.0);
    for_each_sym_index(n, static_cast<int>(l), [&](std::span<const int> idx, std::int64_t pos) {
      std::fill(alpha.begin(), alpha.end(), 0);
      for (int ax : idx) alpha[static_cast<size_t>(ax)] += 1;
      const TensorField du = scalar_partial(u, alpha);
      const double mu = static_cast<double>(sym_multiplicity(idx));
      std::span<cplx> dst = acc.plane(0);
      std::span<const cplx> ap = al.plane(pos);
      std::span<const cplx> dup = du.plane(0);
#pragma omp parallel for schedule(static)
      for (std::int64_t p = 0; p < npts; ++p) {
        const cplx term = mu * dfac * ap[static_cast<size_t>(p)] * dup[static_cast<size_t>(p)];
        dst[static_cast<size_t>(p)] += term;
        absacc[static_cast<size_t>(p)] += std::abs(term);
      }
    });
  }

  TensorField prod(grid, 0);
  TensorField absprod(grid, 0);
  std::span<const cplx> vp = v.plane(0);
  std::span<const cplx> ap = acc.plane(0);
#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < npts; ++p) {
    prod.at(0, p) = ap[static_cast<size_t>(p)] * vp[static_cast<size_t>(p)];
    absprod.at(0, p) = absacc[static_cast<size_t>(p)] * std::abs(vp[static_cast<size_t>(p)]);
  }

  IdentityReport rep;
  rep.value = integrate_trapezoid(prod);
  rep.scale = integrate_trapezoid(absprod).real();
  const double h = grid.min_spacing();
  rep.quad_tol = 25.0 * h * h * rep.scale;
  return rep;
}

cplx cgo_identity_value(const CoefficientSet& coeffs, const CgoParams& params,
                        const Polynomial& a0, const Polynomial& b0, double h) {
  const GridDomain& grid = coeffs.grid();
  const int n = grid.dim();
  const auto zeta = params.zeta();

  // B_j = sum_r R[r][j] d_{y_r} + zeta_j / h (the x_j-derivative of
  // e^{-zeta.x/h} u in frame coordinates).
  std::vector<PolyDiffOp> B;
  B.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    PolyDiffOp op(n);
    for (int r = 0; r < n; ++r) {
      const double w = params.frame.axes[static_cast<size_t>(r)][static_cast<size_t>(j)];
      if (w != 0.0) op += PolyDiffOp::partial(n, r) * cplx(w);
    }
    op += PolyDiffOp::multiply(Polynomial::constant(n, zeta[static_cast<size_t>(j)] / h));
    B.push_back(op);
  }

  // Shifted derivative polynomials per rank and compressed index.
  std::vector<std::vector<Polynomial>> shifted(coeffs.a.size());
  for (size_t l = 0; l < coeffs.a.size(); ++l) {
    const auto count = sym_component_count(n, static_cast<int>(l));
    shifted[l].reserve(static_cast<size_t>(count));
    for_each_sym_index(n, static_cast<int>(l), [&](std::span<const int> idx, std::int64_t) {
      Polynomial p = a0;
      for (int ax : idx) p = op_apply(B[static_cast<size_t>(ax)], p);
      shifted[l].push_back(std::move(p));
    });
  }

  TensorField integrand(grid, 0);
  const std::int64_t npts = grid.num_points();
  std::vector<int> iv(static_cast<size_t>(n));
  for (std::int64_t pt = 0; pt < npts; ++pt) {
    grid.unflatten_into(pt, iv);
    const auto x = grid.point(iv);
    const auto y = params.frame.to_frame(x);
    cplx val = 0.0;
    for (size_t l = 0; l < coeffs.a.size(); ++l) {
      cplx dfac = 1.0;
      for (size_t t = 0; t < l; ++t) dfac *= cplx(0.0, -1.0);
      std::int64_t c = 0;
      for_each_sym_index(n, static_cast<int>(l), [&](std::span<const int> idx, std::int64_t pos) {
        const cplx a = coeffs.a[l].at(pos, pt);
        if (a != cplx(0.0)) {
          val += static_cast<double>(sym_multiplicity(idx)) * dfac * a *
                 shifted[l][static_cast<size_t>(pos)].eval(std::span<const double>(y));
        }
        ++c;
      });
    }
    integrand.at(0, pt) = val * b0.eval(std::span<const double>(y));
  }
  return integrate_trapezoid(integrand);
}

std::vector<Polynomial> polyharmonic_basis(int m, int max_degree, int n) {
  if (max_degree > 8) throw validation_error("polyharmonic_basis: degree cap is 8");
  std::vector<Polynomial> out;
  const PolyDiffOp op = PolyDiffOp::neg_laplacian_pow(n, m);

  Polynomial r2(n);
  for (int a = 0; a < n; ++a) r2 += Polynomial::variable(n, a, 2);

  auto push_checked = [&](const Polynomial& p) {
    if (p.is_zero()) return;
    for (const auto& q : out) {
      if (q.same_terms(p)) return;
    }
    if (!op_apply(op, p).is_zero()) {
      throw numeric_guard_error("polyharmonic_basis: constructed polynomial fails the exact check");
    }
    out.push_back(p);
  };

  for (int j = 0; j < m; ++j) {
    Polynomial weight = Polynomial::constant(n, 1.0);
    for (int t = 0; t < j; ++t) weight = weight * r2;
    for (int d = 0; d + 2 * j <= max_degree; ++d) {
      if (d == 0) {
        push_checked(weight);
        continue;
      }
      if (d == 1) {
        for (int a = 0; a < n; ++a) push_checked(weight * Polynomial::variable(n, a));
        continue;
      }
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          // Re and Im of (x_a + i x_b)^d are harmonic.
          Polynomial re(n), im(n);
          for (int k = 0; k <= d; ++k) {
            const double coef = static_cast<double>(binomial(d, k));
            std::vector<int> e(static_cast<size_t>(n), 0);
            e[static_cast<size_t>(a)] = d - k;
            e[static_cast<size_t>(b)] = k;
            switch (k % 4) {
              case 0: re.add_term(e, coef); break;
              case 1: im.add_term(e, coef); break;
              case 2: re.add_term(e, -coef); break;
              case 3: im.add_term(e, -coef); break;
            }
          }
          push_checked(weight * re);
          push_checked(weight * im);
        }
      }
    }
  }
  return out;
}

GaugeReport gauge_experiment(int m, const Polynomial& phi, const GridDomain& grid,
                             int basis_degree) {
  if (m < 2 || m > 3) throw validation_error("gauge_experiment: m must be 2 or 3");
  const int n = grid.dim();
  if (phi.dim() != n) throw validation_error("gauge_experiment: phi dimension mismatch");

  GaugeReport rep;
  rep.m = m;
  const PolyDiffOp neg_lap_m = PolyDiffOp::neg_laplacian_pow(n, m);

  // Full conjugation: top-order check.
  const PolyDiffOp conj = conjugate_exp(neg_lap_m, phi);
  {
    // (-1)^m 2m (grad phi . grad) Lap^{m-1}
    PolyDiffOp grad_dot(n);
    for (int j = 0; j < n; ++j) {
      grad_dot += op_compose(PolyDiffOp::multiply(phi.derivative(j)), PolyDiffOp::partial(n, j));
    }
    PolyDiffOp expected = op_compose(grad_dot, op_pow(PolyDiffOp::laplacian(n), m - 1));
    expected *= cplx((m % 2 == 0 ? 1.0 : -1.0) * 2.0 * m);
    rep.top_operator_exact = conj.order_part(2 * m - 1).same_terms(expected);

    // tensor route: extract vs (-1)^m 2m i_delta^{m-1}(grad phi) at sample points
    std::vector<double> x(static_cast<size_t>(n));
    double diff = 0.0;
    for (int s = 0; s < 10; ++s) {
      for (int a = 0; a < n; ++a) x[static_cast<size_t>(a)] = -1.0 + 0.25 * ((s + 3 * a) % 9);
      const SymTensor got = extract_coeff_tensor(conj, 2 * m - 1, x);
      std::vector<cplx> grad(static_cast<size_t>(n));
      for (int a = 0; a < n; ++a) grad[static_cast<size_t>(a)] = phi.derivative(a).eval(std::span<const double>(x));
      SymTensor expect = i_delta_pow(SymTensor::vector(grad), m - 1);
      expect *= cplx((m % 2 == 0 ? 1.0 : -1.0) * 2.0 * m);
      const SymTensor d = got - expect;
      for (std::int64_t c = 0; c < d.size(); ++c) diff = std::max(diff, std::abs(d[c]));
    }
    rep.top_tensor_max_diff = diff;
  }

  // Linearized gauge: Q_lin = [(-Delta)^m, phi]; the identity vanishes over
  // polyharmonic pairs when phi has zero boundary jets.
  {
    const PolyDiffOp q_lin = commutator_with_function(neg_lap_m, phi);
    const CoefficientSet cs = coefficient_set_from_operator(q_lin, m, grid);
    const auto basis = polyharmonic_basis(m, basis_degree, n);
    double worst = 0.0;
    for (size_t i = 0; i < basis.size(); ++i) {
      const TensorField u = make_field(grid, 0, [&](std::span<const double> xx) {
        return SymTensor::scalar(n, basis[i].eval(xx));
      });
      for (size_t j = 0; j < basis.size(); j += 3) {
        const TensorField v = make_field(grid, 0, [&](std::span<const double> xx) {
          return SymTensor::scalar(n, basis[j].eval(xx));
        });
        const IdentityReport r = integral_identity(cs, u, v);
        if (r.scale > 0.0) worst = std::max(worst, std::abs(r.value) / r.quad_tol);
      }
    }
    rep.identity_max_ratio = worst;

    // Finite conjugation: u = e^{-phi} w with w polyharmonic, full Q.
    const CoefficientSet cs_full = coefficient_set_from_operator(conj - neg_lap_m, m, grid);
    const Polynomial& w = basis.at(3 % basis.size());
    const Polynomial& vv = basis.at(4 % basis.size());
    const TensorField u_conj = make_field(grid, 0, [&](std::span<const double> xx) {
      return SymTensor::scalar(n, std::exp(-phi.eval(xx).real()) * w.eval(xx));
    });
    const TensorField v = make_field(grid, 0, [&](std::span<const double> xx) {
      return SymTensor::scalar(n, vv.eval(xx));
    });
    const IdentityReport r = integral_identity(cs_full, u_conj, v);
    rep.conjugated_pair_ratio = r.scale > 0.0 ? std::abs(r.value) / r.quad_tol : 0.0;
  }

  // Constant phi: the gauge disappears entirely.
  {
    const PolyDiffOp q0 = commutator_with_function(neg_lap_m, Polynomial::constant(n, 2.5));
    const CoefficientSet cs0 = coefficient_set_from_operator(q0, m, grid);
    rep.zero_phi_max_abs = cs0.max_abs_all();
    const PolyDiffOp conj0 = conjugate_exp(neg_lap_m, Polynomial::constant(n, 2.5));
    PolyDiffOp diff0 = conj0;
    diff0 -= neg_lap_m;
    if (!diff0.is_zero()) {
      const CoefficientSet csf = coefficient_set_from_operator(diff0, m, grid);
      rep.zero_phi_max_abs = std::max(rep.zero_phi_max_abs, csf.max_abs_all());
    }
  }
  return rep;
}

std::vector<std::pair<std::string, double>> GaugeReport::as_metrics() const {
  return {
      {"m", static_cast<double>(m)},
      {"top_operator_exact", top_operator_exact ? 1.0 : 0.0},
      {"top_tensor_max_diff", top_tensor_max_diff},
      {"identity_max_ratio", identity_max_ratio},
      {"conjugated_pair_ratio", conjugated_pair_ratio},
      {"zero_phi_max_abs", zero_phi_max_abs},
  };
}

HypothesisReport hypothesis_check(const TensorField& top_coeff, int m) {
  if (top_coeff.rank() != 2 * m - 1) throw validation_error("hypothesis_check: field must have rank 2m-1");
  HypothesisReport rep;
  const double h = top_coeff.grid().min_spacing();
  const double scale = max_abs(top_coeff);
  const double nn = l2_norm(top_coeff);

  rep.trace_residual = max_abs(field_j_delta(top_coeff));
  rep.trace_free_pass = rep.trace_residual <= 1e-10 * std::max(1.0, scale);

  const TensorField divm = divergence_pow(top_coeff, 2 * m - 1);
  rep.div_residual_rel = nn > 0 ? l2_norm(divm) / nn : 0.0;
  rep.div_free_pass = rep.div_residual_rel <= 50.0 * h * h;

  rep.jet_residual = boundary_jet_residual(top_coeff, 2 * m - 1);
  rep.boundary_jets_pass = rep.jet_residual <= 10.0 * h * h * std::max(1.0, scale);
  return rep;
}

std::vector<std::pair<std::string, double>> HypothesisReport::as_metrics() const {
  return {
      {"trace_residual", trace_residual},
      {"trace_free_pass", trace_free_pass ? 1.0 : 0.0},
      {"div_residual_rel", div_residual_rel},
      {"div_free_pass", div_free_pass ? 1.0 : 0.0},
      {"jet_residual", jet_residual},
      {"boundary_jets_pass", boundary_jets_pass ? 1.0 : 0.0},
  };
}

}  // namespace mrt
