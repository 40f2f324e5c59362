#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "mrt/tensor_ops.hpp"
#include "test_helpers.hpp"

using namespace mrt;
using namespace mrt_test;

TEST_CASE("multi-index enumeration round-trips and counts") {
  for (int n = 1; n <= 4; ++n) {
    for (int m = 0; m <= 4; ++m) {
      std::int64_t count = 0;
      for_each_sym_index(n, m, [&](std::span<const int> idx, std::int64_t pos) {
        CHECK(sym_position(n, idx) == pos);
        const auto back = sym_index_at(n, m, pos);
        CHECK(std::equal(back.begin(), back.end(), idx.begin()));
        ++count;
      });
      CHECK(count == sym_component_count(n, m));
    }
  }
  // multiplicities sum to n^m
  for (int n = 2; n <= 4; ++n) {
    for (int m = 0; m <= 4; ++m) {
      std::int64_t total = 0;
      for_each_sym_index(n, m, [&](std::span<const int> idx, std::int64_t) { total += sym_multiplicity(idx); });
      std::int64_t full = 1;
      for (int i = 0; i < m; ++i) full *= n;
      CHECK(total == full);
    }
  }
}

TEST_CASE("symmetrize: worked 2x2 example and idempotence") {
  // raw t11=1, t12=2, t21=4, t22=3 -> compressed (1, 3, 3)
  std::vector<cplx> raw = {1.0, 2.0, 4.0, 3.0};
  const SymTensor s = symmetrize(raw, 2, 2);
  CHECK(s[0] == cplx(1.0));
  CHECK(s[1] == cplx(3.0));
  CHECK(s[2] == cplx(3.0));

  // idempotence: symmetrizing the expansion returns the same tensor
  const auto full = s.expand_full();
  const SymTensor s2 = symmetrize(full, 2, 2);
  CHECK(max_diff(s, s2) == 0.0);
}

TEST_CASE("symmetrize matches the permutation-average oracle (n=3, m=3)") {
  std::mt19937_64 rng(7);
  const auto raw = random_complex(27, rng);
  const SymTensor s = symmetrize(raw, 3, 3);
  const auto expect = symmetrize_full_oracle(raw, 3, 3);
  const auto got = s.expand_full();
  for (size_t i = 0; i < expect.size(); ++i) {
    CHECK(std::abs(got[i] - expect[i]) < 1e-14);
  }
}

TEST_CASE("inner product equals the full Frobenius pairing") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 4; ++n) {
    for (int m = 0; m <= 4; ++m) {
      const SymTensor f = random_sym(n, m, rng);
      const SymTensor g = random_sym(n, m, rng);
      const cplx a = inner(f, g);
      const cplx b = inner_full_oracle(f, g);
      CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));
    }
  }
}

TEST_CASE("i_delta: scalar and rank-1 worked examples") {
  for (int n = 2; n <= 4; ++n) {
    const SymTensor c = SymTensor::scalar(n, 2.5);
    const SymTensor id = i_delta(c);
    const SymTensor expect = SymTensor::kronecker(n) * cplx(2.5);
    CHECK(max_diff(id, expect) == 0.0);
  }
  // f = (1,0) in R^2: (111)=1, (112)=0, (122)=1/3, (222)=0
  std::vector<cplx> e1 = {1.0, 0.0};
  const SymTensor f = SymTensor::vector(e1);
  const SymTensor g = i_delta(f);
  CHECK(g[0] == cplx(1.0));          // 111
  CHECK(g[1] == cplx(0.0));          // 112
  CHECK(std::abs(g[2] - cplx(1.0 / 3.0)) < 1e-16);  // 122
  CHECK(g[3] == cplx(0.0));          // 222
}

TEST_CASE("i_delta / j_delta adjointness via the expansion oracle") {
  std::mt19937_64 rng(13);
  for (int n = 2; n <= 4; ++n) {
    for (int m = 0; m <= 2; ++m) {
      const SymTensor f = random_sym(n, m, rng);
      const SymTensor g = random_sym(n, m + 2, rng);
      const cplx lhs = inner(i_delta(f), g);
      const cplx rhs = inner(f, j_delta(g));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
      // the same through the full expansion oracle
      const cplx lhs_full = inner_full_oracle(i_delta(f), g);
      CHECK(std::abs(lhs - lhs_full) <= 1e-12 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("j_delta worked examples and degenerate ranks") {
  for (int n = 2; n <= 4; ++n) {
    const SymTensor tr = j_delta(SymTensor::kronecker(n));
    CHECK(tr.rank() == 0);
    CHECK(tr[0] == cplx(static_cast<double>(n)));
    // j(i(c)) for scalars: will be checked against (n+2)c/... no, plain c*n for i_delta of scalar
    const SymTensor c = SymTensor::scalar(n, 1.5);
    // j_delta on ranks 0 and 1 is the zero functional
    CHECK(j_delta(c).rank() == 0);
    CHECK(j_delta(c)[0] == cplx(0.0));
    std::vector<cplx> v(static_cast<size_t>(n), cplx(1.0));
    CHECK(j_delta(SymTensor::vector(v))[0] == cplx(0.0));
  }
  // matrix trace: [[1,2],[2,3]] -> 4
  SymTensor a(2, 2);
  a[0] = 1.0;
  a[1] = 2.0;
  a[2] = 3.0;
  CHECK(j_delta(a)[0] == cplx(4.0));
}

TEST_CASE("i_vec / j_vec worked examples") {
  std::vector<cplx> e1 = {1.0, 0.0};
  std::vector<cplx> e2 = {0.0, 1.0};
  const SymTensor one = SymTensor::scalar(2, 1.0);
  const SymTensor iv = i_vec(one, e1);
  CHECK(iv[0] == cplx(1.0));
  CHECK(iv[1] == cplx(0.0));

  const SymTensor iv2 = i_vec(SymTensor::vector(e1), e2);
  CHECK(iv2[0] == cplx(0.0));
  CHECK(iv2[1] == cplx(0.5));
  CHECK(iv2[2] == cplx(0.0));

  // j_vec(delta, x) = x
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 4; ++n) {
    const auto xc = random_complex(static_cast<size_t>(n), rng);
    const SymTensor jd = j_vec(SymTensor::kronecker(n), xc);
    for (int a = 0; a < n; ++a) CHECK(std::abs(jd[a] - xc[static_cast<size_t>(a)]) < 1e-15);
  }

  // j_vec(x^m, x) = |x|^2 x^{m-1} for real x
  for (int m = 1; m <= 4; ++m) {
    std::vector<cplx> x = {0.3, -1.2, 0.7};
    double x2 = 0.0;
    for (auto& c : x) x2 += std::norm(c);
    const SymTensor xp = SymTensor::vector_power(x, m);
    const SymTensor expect = SymTensor::vector_power(x, m - 1) * cplx(x2);
    CHECK(max_diff(j_vec(xp, x), expect) < 1e-13);
  }

  CHECK_THROWS_AS(j_vec(SymTensor::scalar(2, 1.0), e1), validation_error);
}

TEST_CASE("i_vec / j_vec adjointness for real vectors") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 2; n <= 4; ++n) {
    for (int m = 0; m <= 3; ++m) {
      const SymTensor f = random_sym(n, m, rng);
      const SymTensor g = random_sym(n, m + 1, rng);
      std::vector<double> x(static_cast<size_t>(n));
      for (auto& v : x) v = u(rng);
      const cplx lhs = inner(i_vec(f, x), g);
      const cplx rhs = inner(f, j_vec(g, x));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("Sharafutdinov contraction identity, 100 random draws") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int m = static_cast<int>(rng() % 4);  // ranks 0..3
    const SymTensor f = random_sym(n, m, rng);
    std::vector<cplx> xi(static_cast<size_t>(n));
    double xi2 = 0.0;
    for (auto& v : xi) {
      v = u(rng);
      xi2 += v.real() * v.real();
    }
    const SymTensor lhs = j_vec(i_vec(f, xi), xi);
    SymTensor rhs = f * cplx(xi2 / (m + 1));
    if (m >= 1) {
      rhs += i_vec(j_vec(f, xi), xi) * cplx(static_cast<double>(m) / (m + 1));
    }
    CHECK(max_diff(lhs, rhs) <= 1e-12 * (1.0 + norm(f)));
  }
}

TEST_CASE("trace-free decomposition: worked 2x2 example") {
  SymTensor f(2, 2);
  f[0] = 2.0;  // (11)
  f[1] = 0.0;
  f[2] = 0.0;
  const auto parts = trace_free_decompose(f);
  REQUIRE(parts.size() == 2);
  // b^{2,0} = [[1,0],[0,-1]], b^{2,1} = 1
  CHECK(std::abs(parts[0][0] - cplx(1.0)) < 1e-14);
  CHECK(std::abs(parts[0][1]) < 1e-14);
  CHECK(std::abs(parts[0][2] - cplx(-1.0)) < 1e-14);
  CHECK(std::abs(parts[1][0] - cplx(1.0)) < 1e-14);
}

TEST_CASE("trace-free decomposition: reassembly, orthogonality, least-squares oracle") {
  std::mt19937_64 rng(29);
  for (int n = 2; n <= 4; ++n) {
    for (int l = 0; l <= 4; ++l) {
      const SymTensor f = random_sym(n, l, rng);
      const auto parts = trace_free_decompose(f);
      REQUIRE(static_cast<int>(parts.size()) == l / 2 + 1);

      SymTensor sum(n, l);
      for (size_t k = 0; k < parts.size(); ++k) {
        CHECK(parts[k].rank() == l - 2 * static_cast<int>(k));
        // each part is trace-free
        if (parts[k].rank() >= 2) {
          SymTensor tr = j_delta(parts[k]);
          for (std::int64_t i = 0; i < tr.size(); ++i) CHECK(std::abs(tr[i]) < 1e-12);
        }
        sum += i_delta_pow(parts[k], static_cast<int>(k));
      }
      CHECK(max_diff(sum, f) < 1e-10);

      // orthogonality of the summands
      for (size_t a = 0; a < parts.size(); ++a) {
        for (size_t b = a + 1; b < parts.size(); ++b) {
          const cplx ip = inner(i_delta_pow(parts[a], static_cast<int>(a)),
                                i_delta_pow(parts[b], static_cast<int>(b)));
          CHECK(std::abs(ip) < 1e-10 * (1.0 + norm(f) * norm(f)));
        }
      }

      // uniqueness: decomposing i_delta^k w returns w in slot k
      if (l >= 2) {
        const SymTensor w = project_trace_free(random_sym(n, l - 2, rng));
        const auto parts2 = trace_free_decompose(i_delta(w));
        CHECK(max_diff(parts2[1], w) < 1e-10);
        for (std::int64_t i = 0; i < parts2[0].size(); ++i) CHECK(std::abs(parts2[0][i]) < 1e-10);
      }
    }
  }

  // dense least-squares oracle for the leading trace-free part (n=3, l=4):
  // minimize |f - i_delta g| over g and compare the residual with p f.
  {
    std::mt19937_64 rng2(31);
    const int n = 3, l = 4;
    const SymTensor f = random_sym(n, l, rng2);
    const auto rows = sym_component_count(n, l);
    const auto cols = sym_component_count(n, l - 2);
    Eigen::MatrixXcd A(rows, cols);
    for (std::int64_t c = 0; c < cols; ++c) {
      SymTensor e(n, l - 2);
      e[c] = 1.0;
      const SymTensor img = i_delta(e);
      for (std::int64_t r = 0; r < rows; ++r) A(r, c) = img[r];
    }
    // weight both sides so the normal equations reproduce the multiplicity
    // inner product
    Eigen::VectorXd wts(rows);
    for_each_sym_index(n, l, [&](std::span<const int> idx, std::int64_t pos) {
      wts(pos) = std::sqrt(static_cast<double>(sym_multiplicity(idx)));
    });
    Eigen::VectorXcd b(rows);
    for (std::int64_t r = 0; r < rows; ++r) b(r) = f[r] * wts(r);
    for (std::int64_t r = 0; r < rows; ++r) {
      for (std::int64_t c = 0; c < cols; ++c) A(r, c) *= wts(r);
    }
    const Eigen::VectorXcd g = A.colPivHouseholderQr().solve(b);
    Eigen::VectorXcd resid = b - A * g;
    const SymTensor pf = project_trace_free(f);
    for (std::int64_t r = 0; r < rows; ++r) {
      CHECK(std::abs(resid(r) / wts(r) - pf[r]) < 1e-10);
    }
  }
}

TEST_CASE("projection p: worked examples and operator identities") {
  std::mt19937_64 rng(37);
  for (int n = 2; n <= 4; ++n) {
    // p(delta) = 0
    const SymTensor pd = project_trace_free(SymTensor::kronecker(n));
    for (std::int64_t i = 0; i < pd.size(); ++i) CHECK(std::abs(pd[i]) < 1e-14);
    // identity on rank 1
    const SymTensor v = random_sym(n, 1, rng);
    CHECK(max_diff(project_trace_free(v), v) == 0.0);

    for (int m = 2; m <= 4; ++m) {
      const SymTensor f = random_sym(n, m, rng);
      const SymTensor pf = project_trace_free(f);
      // p^2 = p
      CHECK(max_diff(project_trace_free(pf), pf) < 1e-12);
      // j_delta . p = 0
      const SymTensor tr = j_delta(pf);
      for (std::int64_t i = 0; i < tr.size(); ++i) CHECK(std::abs(tr[i]) < 1e-12);
      // ker p contains the image of i_delta
      const SymTensor w = random_sym(n, m - 2, rng);
      const SymTensor piw = project_trace_free(i_delta(w));
      for (std::int64_t i = 0; i < piw.size(); ++i) CHECK(std::abs(piw[i]) < 1e-12);
      // self-adjointness under the multiplicity inner product
      const SymTensor g = random_sym(n, m, rng);
      CHECK(std::abs(inner(pf, g) - inner(f, project_trace_free(g))) < 1e-12 * (1.0 + std::abs(inner(f, g))));
    }
  }
}

TEST_CASE("jdelta_idelta_solve: scalar case, round trip, the quoted eigenvalue") {
  std::mt19937_64 rng(41);
  for (int n = 2; n <= 4; ++n) {
    const SymTensor g = SymTensor::scalar(n, 3.0);
    const SymTensor x = jdelta_idelta_solve(g);
    CHECK(std::abs(x[0] - cplx(3.0 / n)) < 1e-14);
  }
  {
    const SymTensor g = random_sym(3, 2, rng);
    const SymTensor x = jdelta_idelta_solve(g);
    CHECK(max_diff(j_delta(i_delta(x)), g) < 1e-12);
  }
  // (j_d i_d)^{-1} j_xi f = m(m+1)/(2(n+2m-2)) j_xi f for trace-free f
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 2; n <= 4; ++n) {
    for (int m = 2; m <= 4; ++m) {
      const SymTensor f = project_trace_free(random_sym(n, m, rng));
      std::vector<cplx> xi(static_cast<size_t>(n));
      for (auto& v : xi) v = cplx(u(rng), 0.0);
      const SymTensor jf = j_vec(f, xi);
      const SymTensor lhs = jdelta_idelta_solve(jf);
      const SymTensor rhs = jf * cplx(m * (m + 1) / (2.0 * (n + 2 * m - 2)));
      CHECK(max_diff(lhs, rhs) < 1e-11 * (1.0 + norm(jf)));
    }
  }
}
