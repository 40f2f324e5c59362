#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "mrt/helmholtz.hpp"
#include "mrt/phantom.hpp"
#include "mrt/separation.hpp"
#include "test_helpers.hpp"

using namespace mrt;
using namespace mrt_test;

TEST_CASE("separation matrix: worked entries and determinants") {
  {
    std::vector<double> c = {2.0, 3.0};  // c_0, c_1
    const SeparationMatrix A = separation_matrix(1, c);
    CHECK(A.entry(0, 0) == 3.0);
    CHECK(A.entry(0, 1) == 2.0);
    CHECK(A.entry(1, 0) == 6.0);  // 2 c_1
    CHECK(A.entry(1, 1) == 2.0);
    const auto d = determinant_check(1, c);
    CHECK(d.formula == -6.0);  // -c_0 c_1
    CHECK(std::abs(d.computed - d.formula) < 1e-12);
  }
  {
    std::vector<double> ones = {1.0, 1.0, 1.0};
    const auto d = determinant_check(2, ones);
    CHECK(d.formula == -1.0);
    CHECK(std::abs(d.computed + 1.0) < 1e-12);
  }
  {
    std::vector<double> c = {1.0};
    const SeparationMatrix A = separation_matrix(0, c);
    CHECK(A.entry(0, 0) == 1.0);
  }
  {
    std::vector<double> ones = {1.0, 1.0, 1.0, 1.0};
    CHECK(determinant_check(3, ones).formula == 1.0);  // (-1)^6
    std::vector<double> c = {2.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(determinant_check(4, c).formula == 2.0);  // (-1)^10 * 2
  }
  std::vector<double> zero_c = {1.0, 0.0};
  CHECK_THROWS_AS(separation_matrix(1, zero_c), validation_error);
}

TEST_CASE("determinant identity over random constants, both computation paths") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int m = 1; m <= 8; ++m) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> c(static_cast<size_t>(m + 1));
      for (auto& v : c) {
        do {
          v = u(rng);
        } while (std::abs(v) < 0.05);
      }
      const auto d = determinant_check(m, c);
      CHECK(d.rel_error < 1e-8);
      // independent column-subtraction recursion
      const double rec = determinant_by_column_recursion(m, c);
      CHECK(std::abs(rec - d.formula) <= 1e-12 * std::abs(d.formula));
    }
  }
}

TEST_CASE("separate_components: trivial kernel, round trip, worked 2x2 numbers") {
  std::vector<double> ones = {1.0, 1.0};
  const SeparationMatrix A = separation_matrix(1, ones);
  {
    std::vector<cplx> rhs = {0.0, 0.0};
    const auto x = separate_components(A, rhs);
    CHECK(std::abs(x[0]) == 0.0);
    CHECK(std::abs(x[1]) == 0.0);
  }
  {
    // I^1 F_1 = 3, I^0 F_0 = -1 -> rhs = (2, 5)
    std::vector<cplx> rhs = {2.0, 5.0};
    const auto x = separate_components(A, rhs);
    CHECK(std::abs(x[0] - cplx(3.0)) < 1e-12);
    CHECK(std::abs(x[1] - cplx(-1.0)) < 1e-12);
  }
  // synthetic round trip at m = 3 with complex data
  std::mt19937_64 rng(5);
  std::vector<double> c = {1.3, -0.7, 2.1, 0.4};
  const SeparationMatrix A3 = separation_matrix(3, c);
  const auto truth = random_complex(4, rng);
  std::vector<cplx> rhs(4, cplx(0.0));
  for (int r = 0; r < 4; ++r) {
    for (int j = 0; j < 4; ++j) rhs[static_cast<size_t>(r)] += A3.entry(r, j) * truth[static_cast<size_t>(j)];
  }
  const auto back = separate_components(A3, rhs);
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(back[static_cast<size_t>(j)] - truth[static_cast<size_t>(j)]) < 1e-10);
  }
  std::vector<cplx> bad_rhs = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(separate_components(A3, bad_rhs), validation_error);
}

TEST_CASE("shifted separation variant mirrors the first construction") {
  // d_m I^{k+m-1}F_m + ... + d_1 I^k F_1 = 0 rows; same solver applies.
  std::mt19937_64 rng(7);
  std::vector<double> d = {0.9, -1.4, 0.6};  // d_1..d_3
  const SeparationMatrix A = separation_matrix_shifted(3, d);
  CHECK(A.m == 2);
  const auto truth = random_complex(3, rng);
  std::vector<cplx> rhs(3, cplx(0.0));
  for (int r = 0; r < 3; ++r) {
    for (int j = 0; j < 3; ++j) rhs[static_cast<size_t>(r)] += A.entry(r, j) * truth[static_cast<size_t>(j)];
  }
  const auto back = separate_components(A, rhs);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(back[static_cast<size_t>(j)] - truth[static_cast<size_t>(j)]) < 1e-10);
  }
}

TEST_CASE("kernel membership fields annihilate I^m by construction") {
  const GridDomain g = GridDomain::cube(2, 13);
  const MixedField F = kernel_member_field(g, 2, 42);
  // f^{(1)} forced to zero, f^{(2)} = -i_delta f^{(0)}
  CHECK(max_abs(F[1]) == 0.0);
  TensorField diff = field_i_delta(F[0]) * cplx(-1.0);
  diff -= F[2];
  CHECK(max_abs(diff) < 1e-14);
  const auto rays = make_ray_set(g, 50, 2, 1);
  const auto vals = transform_rays(F, rays);
  for (const cplx& v : vals) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("kernel probe separates members from violators") {
  const KernelProbeReport rep = kernel_probe(2, 2, 13, 120, 0);
  for (double r : rep.member_residuals) CHECK(r <= 1e-2);
  for (double r : rep.nonmember_residuals) CHECK(r >= 5e-2);
  CHECK(rep.sigma_min_m0 > 1e-6 * rep.sigma_max_m0);
  CHECK(rep.sigma_min_m1 > 1e-6 * rep.sigma_max_m1);
  CHECK_THROWS_AS(kernel_probe(3, 2, 13, 10, 0), validation_error);
}

namespace {

// phi on the grid from a zero-jet polynomial bump, pinned to exact zeros on
// the width-m collar so it sits in the discrete solution space
TensorField sample_phi(const GridDomain& g, int m) {
  const Polynomial phi = zero_jet_bump_poly(g.dim(), m);
  TensorField f = make_field(g, 0, [&](std::span<const double> x) {
    return SymTensor::scalar(g.dim(), phi.eval(x));
  });
  std::vector<int> iv(static_cast<size_t>(g.dim()));
  for (std::int64_t p = 0; p < g.num_points(); ++p) {
    g.unflatten_into(p, iv);
    for (int a = 0; a < g.dim(); ++a) {
      if (iv[static_cast<size_t>(a)] < m || iv[static_cast<size_t>(a)] >= g.dims()[static_cast<size_t>(a)] - m) {
        f.at(0, p) = 0.0;
        break;
      }
    }
  }
  return f;
}

}  // namespace

TEST_CASE("helmholtz: exact-form inputs recover cleanly (m = 2)") {
  const GridDomain g = GridDomain::cube(2, 17);
  const TensorField phi_star = sample_phi(g, 2);
  const TensorField f = sym_derivative_pow(phi_star, 2, FaceRule::zero_extension);
  const auto res = helmholtz_trace_free(f, 1e-12);
  const double fn = l2_norm(f);
  CHECK(l2_norm(res.f_tilde) <= 1e-6 * fn);
  REQUIRE(res.v.has_value());
  CHECK(l2_norm(*res.v) <= 1e-6 * fn);
  TensorField phi_err = res.phi;
  phi_err -= phi_star;
  CHECK(l2_norm(phi_err) <= 1e-5 * l2_norm(phi_star));
  CHECK(res.reassembly_rel <= 1e-10);
}

TEST_CASE("helmholtz: pure i_delta input lands in v (m = 2)") {
  const GridDomain g = GridDomain::cube(2, 17);
  const TensorField w = random_smooth_field(g, 0, 77, 2, false);
  const TensorField f = field_i_delta(w);
  const auto res = helmholtz_trace_free(f, 1e-12);
  CHECK(l2_norm(res.phi) <= 1e-8 * l2_norm(f));
  CHECK(l2_norm(res.f_tilde) <= 1e-8 * l2_norm(f));
  REQUIRE(res.v.has_value());
  TensorField verr = *res.v;
  verr -= w;
  CHECK(l2_norm(verr) <= 1e-8 * l2_norm(w));
}

TEST_CASE("helmholtz: random interior input satisfies the residual contract") {
  const GridDomain g = GridDomain::cube(2, 17);
  const TensorField f = random_smooth_field(g, 2, 99, 3, false);
  const auto res = helmholtz_trace_free(f, 1e-10);
  CHECK(res.reassembly_rel <= 1e-3);
  CHECK(res.jdelta_ftilde <= 1e-10);
  CHECK(res.div_m_ftilde_rel <= 1e-2);
}

TEST_CASE("helmholtz m = 1 reduces to the solenoidal split") {
  const GridDomain g = GridDomain::cube(2, 17);
  const TensorField phi_star = sample_phi(g, 1);
  const TensorField f = sym_derivative(phi_star, FaceRule::zero_extension);
  const auto res = helmholtz_trace_free(f, 1e-12);
  CHECK(!res.v.has_value());
  CHECK(l2_norm(res.f_tilde) <= 1e-6 * l2_norm(f));
  TensorField phi_err = res.phi;
  phi_err -= phi_star;
  CHECK(l2_norm(phi_err) <= 1e-6 * l2_norm(phi_star));
}

TEST_CASE("BVP operator: discrete self-adjointness and dense-solve oracle") {
  const GridDomain g = GridDomain::cube(2, 13);
  const int m = 2;
  // interior unknowns (margin m)
  std::vector<std::int64_t> ids;
  std::vector<int> iv(2);
  for (std::int64_t p = 0; p < g.num_points(); ++p) {
    g.unflatten_into(p, iv);
    if (iv[0] >= m && iv[0] < 13 - m && iv[1] >= m && iv[1] < 13 - m) ids.push_back(p);
  }
  const int nunk = static_cast<int>(ids.size());

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TensorField phi(g, 0), psi(g, 0);
  for (std::int64_t p : ids) {
    phi.at(0, p) = cplx(u(rng), 0.0);
    psi.at(0, p) = cplx(u(rng), 0.0);
  }
  const TensorField lphi = bvp_operator_apply(phi, m);
  const TensorField lpsi = bvp_operator_apply(psi, m);
  // <L phi, psi> = <p d^m phi, p d^m psi>
  const TensorField pd_phi = field_project_trace_free(sym_derivative_pow(phi, m, FaceRule::zero_extension));
  const TensorField pd_psi = field_project_trace_free(sym_derivative_pow(psi, m, FaceRule::zero_extension));
  const cplx a = field_inner(lphi, psi);
  const cplx b = field_inner(pd_phi, pd_psi);
  CHECK(std::abs(a - b) <= 1e-8 * (1.0 + std::abs(a)));
  const cplx c = field_inner(phi, lpsi);
  CHECK(std::abs(a - c) <= 1e-10 * (1.0 + std::abs(a)));

  // dense assembly + direct solve vs CG
  Eigen::MatrixXd L(nunk, nunk);
  for (int j = 0; j < nunk; ++j) {
    TensorField e(g, 0);
    e.at(0, ids[static_cast<size_t>(j)]) = 1.0;
    const TensorField le = bvp_operator_apply(e, m);
    for (int i = 0; i < nunk; ++i) L(i, j) = le.at(0, ids[static_cast<size_t>(i)]).real();
  }
  CHECK((L - L.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  CHECK(es.eigenvalues()(0) > 0.0);  // strictly positive definite on the unknowns

  const TensorField f = random_smooth_field(g, 2, 13, 2, false);
  TensorField rhs_field = divergence_pow(field_project_trace_free(f), m, FaceRule::zero_extension);
  Eigen::VectorXd rhs(nunk);
  for (int i = 0; i < nunk; ++i) rhs(i) = rhs_field.at(0, ids[static_cast<size_t>(i)]).real();
  const Eigen::VectorXd direct = L.ldlt().solve(rhs);
  const auto res = helmholtz_trace_free(f, 1e-12);
  double worst = 0.0;
  for (int i = 0; i < nunk; ++i) {
    worst = std::max(worst, std::abs(res.phi.at(0, ids[static_cast<size_t>(i)]).real() - direct(i)));
  }
  CHECK(worst <= 1e-7 * (1.0 + direct.cwiseAbs().maxCoeff()));
}

TEST_CASE("decomposition residuals shrink under refinement (order >= 1.5)") {
  const Polynomial phi_poly = zero_jet_bump_poly(2, 2);
  auto phi_error_at = [&](int pts) {
    const GridDomain g = GridDomain::cube(2, pts);
    const TensorField phi_star = make_field(g, 0, [&](std::span<const double> x) {
      return SymTensor::scalar(2, phi_poly.eval(x));
    });
    // analytic d^2 phi sampled on the grid
    const TensorField f = make_field(g, 2, [&](std::span<const double> x) {
      SymTensor t(2, 2);
      t[0] = phi_poly.derivative(0).derivative(0).eval(x);
      t[1] = phi_poly.derivative(0).derivative(1).eval(x);
      t[2] = phi_poly.derivative(1).derivative(1).eval(x);
      return t;
    });
    const auto res = helmholtz_trace_free(f, 1e-12);
    TensorField err = res.phi;
    err -= phi_star;
    return l2_norm(err) / l2_norm(phi_star);
  };
  const double e17 = phi_error_at(17);
  const double e33 = phi_error_at(33);
  const double order = std::log2(e17 / e33);
  CHECK(order >= 1.5);
}

TEST_CASE("orthogonality sanity: f_tilde against exact forms") {
  const GridDomain g = GridDomain::cube(2, 17);
  const TensorField f = random_smooth_field(g, 2, 101, 3, false);
  const auto res = helmholtz_trace_free(f, 1e-10);
  const TensorField phi2 = sample_phi(g, 2);
  const TensorField dphi = sym_derivative_pow(phi2, 2, FaceRule::zero_extension);
  const double ip = std::abs(field_inner(res.f_tilde, dphi));
  CHECK(ip <= 5.0 * g.min_spacing() * (l2_norm(res.f_tilde) * l2_norm(dphi) + 1e-12));
}

TEST_CASE("symbol positivity and the quoted quadratic identity") {
  // m = 1: the Rayleigh value is |xi|^2
  std::vector<double> e1 = {1.0, 0.0, 0.0};
  CHECK(std::abs(symbol_rayleigh(e1, 1, 3) - 1.0) < 1e-14);

  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int n = 2; n <= 4; ++n) {
    for (int m = 1; m <= 3; ++m) {
      double min_val = 1e300;
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> xi(static_cast<size_t>(n));
        double nrm = 0.0;
        for (auto& v : xi) {
          v = gauss(rng);
          nrm += v * v;
        }
        nrm = std::sqrt(nrm);
        for (auto& v : xi) v /= nrm;
        min_val = std::min(min_val, symbol_rayleigh(xi, m, n));

        // identity on f = p i_vec^m(1, xi) and on a random trace-free tensor
        std::vector<cplx> xic(xi.begin(), xi.end());
        SymTensor f = SymTensor::scalar(n, 1.0);
        for (int i = 0; i < m; ++i) f = i_vec(f, std::span<const cplx>(xic));
        f = project_trace_free(f);
        auto [lhs, rhs] = symbol_identity_sides(f, xi);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
        const SymTensor rnd = project_trace_free(random_sym(n, m, rng, false));
        std::tie(lhs, rhs) = symbol_identity_sides(rnd, xi);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
      }
      CHECK(min_val > 1e-3);
    }
  }
}
