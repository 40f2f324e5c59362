#include "mrt/diff_op.hpp"

#include <algorithm>

namespace mrt {

namespace {
constexpr int kOrderGuard = 2 * kMaxRank;

int total(std::span<const int> alpha) {
  int s = 0;
  for (int a : alpha) s += a;
  return s;
}
}  // namespace

PolyDiffOp PolyDiffOp::identity(int n) {
  PolyDiffOp op(n);
  std::vector<int> a(static_cast<size_t>(n), 0);
  op.add_term(a, Polynomial::constant(n, 1.0));
  return op;
}

PolyDiffOp PolyDiffOp::partial(int n, int axis) {
  PolyDiffOp op(n);
  std::vector<int> a(static_cast<size_t>(n), 0);
  a[static_cast<size_t>(axis)] = 1;
  op.add_term(a, Polynomial::constant(n, 1.0));
  return op;
}

PolyDiffOp PolyDiffOp::multiply(const Polynomial& p) {
  PolyDiffOp op(p.dim());
  std::vector<int> a(static_cast<size_t>(p.dim()), 0);
  op.add_term(a, p);
  return op;
}

PolyDiffOp PolyDiffOp::laplacian(int n) {
  PolyDiffOp op(n);
  std::vector<int> a(static_cast<size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    std::fill(a.begin(), a.end(), 0);
    a[static_cast<size_t>(j)] = 2;
    op.add_term(a, Polynomial::constant(n, 1.0));
  }
  return op;
}

PolyDiffOp PolyDiffOp::neg_laplacian_pow(int n, int m) {
  PolyDiffOp neg = laplacian(n) * cplx(-1.0);
  return op_pow(neg, m);
}

int PolyDiffOp::order() const {
  int d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, total(a));
  return d;
}

void PolyDiffOp::add_term(std::span<const int> alpha, const Polynomial& coeff) {
  if (static_cast<int>(alpha.size()) != n_) throw validation_error("diff op: exponent length mismatch");
  if (coeff.is_zero()) return;
  std::vector<int> key(alpha.begin(), alpha.end());
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), coeff);
  } else {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

PolyDiffOp& PolyDiffOp::operator+=(const PolyDiffOp& o) {
  if (n_ != o.n_) throw validation_error("diff op: dim mismatch");
  for (const auto& [a, c] : o.terms_) add_term(a, c);
  return *this;
}

PolyDiffOp& PolyDiffOp::operator-=(const PolyDiffOp& o) {
  if (n_ != o.n_) throw validation_error("diff op: dim mismatch");
  for (const auto& [a, c] : o.terms_) add_term(a, c * cplx(-1.0));
  return *this;
}

PolyDiffOp& PolyDiffOp::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [a, c] : terms_) c *= s;
  return *this;
}

PolyDiffOp PolyDiffOp::order_part(int l) const {
  PolyDiffOp out(n_);
  for (const auto& [a, c] : terms_) {
    if (total(a) == l) out.add_term(a, c);
  }
  return out;
}

bool PolyDiffOp::same_terms(const PolyDiffOp& o, double tol) const {
  PolyDiffOp d = *this;
  d -= o;
  if (tol == 0.0) return d.terms_.empty();
  for (const auto& [a, c] : d.terms_) {
    for (const auto& [e, v] : c.terms()) {
      if (std::abs(v) > tol) return false;
    }
  }
  return true;
}

Polynomial op_apply(const PolyDiffOp& P, const Polynomial& u) {
  if (P.dim() != u.dim()) throw validation_error("op_apply: dim mismatch");
  Polynomial out(P.dim());
  for (const auto& [alpha, c] : P.terms()) {
    Polynomial du = u;
    for (int a = 0; a < P.dim(); ++a) {
      for (int k = 0; k < alpha[static_cast<size_t>(a)]; ++k) du = du.derivative(a);
      if (du.is_zero()) break;
    }
    if (du.is_zero()) continue;
    out += c * du;
  }
  return out;
}

PolyDiffOp op_compose(const PolyDiffOp& P, const PolyDiffOp& Q) {
  if (P.dim() != Q.dim()) throw validation_error("op_compose: dim mismatch");
  if (P.order() + Q.order() > kOrderGuard) throw numeric_guard_error("op_compose: combined order guard exceeded");
  const int n = P.dim();
  PolyDiffOp out(n);
  // P.Q : for each p_a d^a, q_b d^b expand d^a (q_b .) by Leibniz.
  std::vector<int> gamma(static_cast<size_t>(n));
  std::vector<int> rest(static_cast<size_t>(n));
  for (const auto& [a, pa] : P.terms()) {
    for (const auto& [b, qb] : Q.terms()) {
      // enumerate gamma <= a (the part of d^a landing on q_b)
      std::fill(gamma.begin(), gamma.end(), 0);
      while (true) {
        Polynomial dq = qb;
        double binom = 1.0;
        bool zero = false;
        for (int ax = 0; ax < n; ++ax) {
          binom *= static_cast<double>(binomial(a[static_cast<size_t>(ax)], gamma[static_cast<size_t>(ax)]));
          for (int k = 0; k < gamma[static_cast<size_t>(ax)]; ++k) dq = dq.derivative(ax);
          if (dq.is_zero()) {
            zero = true;
            break;
          }
        }
        if (!zero) {
          for (int ax = 0; ax < n; ++ax) {
            rest[static_cast<size_t>(ax)] = a[static_cast<size_t>(ax)] - gamma[static_cast<size_t>(ax)] + b[static_cast<size_t>(ax)];
          }
          out.add_term(rest, (pa * dq) * cplx(binom));
        }
        // next gamma
        int ax = 0;
        while (ax < n) {
          if (gamma[static_cast<size_t>(ax)] < a[static_cast<size_t>(ax)]) {
            ++gamma[static_cast<size_t>(ax)];
            break;
          }
          gamma[static_cast<size_t>(ax)] = 0;
          ++ax;
        }
        if (ax == n) break;
      }
    }
  }
  return out;
}

PolyDiffOp op_pow(const PolyDiffOp& P, int k) {
  PolyDiffOp out = PolyDiffOp::identity(P.dim());
  for (int i = 0; i < k; ++i) out = op_compose(out, P);
  return out;
}

PolyDiffOp conjugate_exp(const PolyDiffOp& P, const Polynomial& phi) {
  if (P.dim() != phi.dim()) throw validation_error("conjugate_exp: dim mismatch");
  const int n = P.dim();
  std::vector<PolyDiffOp> shifted;
  shifted.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    shifted.push_back(PolyDiffOp::partial(n, j) + PolyDiffOp::multiply(phi.derivative(j)));
  }
  PolyDiffOp out(n);
  for (const auto& [alpha, c] : P.terms()) {
    PolyDiffOp term = PolyDiffOp::multiply(c);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < alpha[static_cast<size_t>(j)]; ++k) term = op_compose(term, shifted[static_cast<size_t>(j)]);
    }
    out += term;
  }
  return out;
}

PolyDiffOp commutator_with_function(const PolyDiffOp& P, const Polynomial& phi) {
  const PolyDiffOp mp = PolyDiffOp::multiply(phi);
  PolyDiffOp out = op_compose(P, mp);
  out -= op_compose(mp, P);
  return out;
}

SymTensor extract_coeff_tensor(const PolyDiffOp& P, int l, std::span<const double> x) {
  const int n = P.dim();
  SymTensor t(n, l);
  // evaluate the undivided coefficient and divide the value, so exact
  // (integer or dyadic) coefficient data stays exact until the last step
  for (const auto& [alpha, c] : P.terms()) {
    if (total(alpha) != l) continue;
    std::vector<int> idx;
    idx.reserve(static_cast<size_t>(l));
    for (int ax = 0; ax < n; ++ax) {
      for (int k = 0; k < alpha[static_cast<size_t>(ax)]; ++k) idx.push_back(ax);
    }
    t.at(idx) += c.eval(x) / static_cast<double>(sym_multiplicity(idx));
  }
  return t;
}

std::vector<Polynomial> extract_coeff_tensor_polys(const PolyDiffOp& P, int l) {
  const int n = P.dim();
  std::vector<Polynomial> out(static_cast<size_t>(sym_component_count(n, l)), Polynomial(n));
  for (const auto& [alpha, c] : P.terms()) {
    if (total(alpha) != l) continue;
    std::vector<int> idx;
    idx.reserve(static_cast<size_t>(l));
    for (int ax = 0; ax < n; ++ax) {
      for (int k = 0; k < alpha[static_cast<size_t>(ax)]; ++k) idx.push_back(ax);
    }
    const auto pos = sym_position(n, idx);
    const double mu = static_cast<double>(sym_multiplicity(idx));
    Polynomial scaled(n);
    for (const auto& [e, v] : c.terms()) scaled.add_term(e, v / mu);
    out[static_cast<size_t>(pos)] += scaled;
  }
  return out;
}

}  // namespace mrt
