#include "mrt/sym_tensor.hpp"

#include <algorithm>
#include <cmath>

namespace mrt {

SymTensor::SymTensor(int n, int m) : n_(n), m_(m) {
  validate_rank_dim(n, m);
  c_.assign(static_cast<size_t>(sym_component_count(n, m)), cplx(0.0));
}

SymTensor SymTensor::scalar(int n, cplx value) {
  SymTensor t(n, 0);
  t[0] = value;
  return t;
}

SymTensor SymTensor::kronecker(int n) {
  SymTensor t(n, 2);
  std::vector<int> idx(2);
  for (int i = 0; i < n; ++i) {
    idx[0] = idx[1] = i;
    t.at(idx) = 1.0;
  }
  return t;
}

SymTensor SymTensor::vector(std::span<const cplx> x) {
  SymTensor t(static_cast<int>(x.size()), 1);
  for (size_t i = 0; i < x.size(); ++i) t[static_cast<std::int64_t>(i)] = x[i];
  return t;
}

SymTensor SymTensor::vector_power(std::span<const cplx> x, int m) {
  const int n = static_cast<int>(x.size());
  SymTensor t(n, m);
  for_each_sym_index(n, m, [&](std::span<const int> idx, std::int64_t pos) {
    cplx v = 1.0;
    for (int a : idx) v *= x[static_cast<size_t>(a)];
    t[pos] = v;
  });
  return t;
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  if (n_ != o.n_ || m_ != o.m_) throw validation_error("tensor shape mismatch");
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
  if (n_ != o.n_ || m_ != o.m_) throw validation_error("tensor shape mismatch");
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SymTensor& SymTensor::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

std::vector<cplx> SymTensor::expand_full() const {
  std::int64_t total = 1;
  for (int a = 0; a < m_; ++a) total *= n_;
  std::vector<cplx> full(static_cast<size_t>(total));
  std::vector<int> tup(static_cast<size_t>(m_), 0);
  std::vector<int> sorted(static_cast<size_t>(m_));
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t r = flat;
    for (int a = m_ - 1; a >= 0; --a) {
      tup[static_cast<size_t>(a)] = static_cast<int>(r % n_);
      r /= n_;
    }
    sorted = tup;
    std::sort(sorted.begin(), sorted.end());
    full[static_cast<size_t>(flat)] = at(sorted);
  }
  return full;
}

SymTensor symmetrize(std::span<const cplx> raw, int n, int m) {
  validate_rank_dim(n, m);
  std::int64_t total = 1;
  for (int a = 0; a < m; ++a) total *= n;
  if (static_cast<std::int64_t>(raw.size()) != total) {
    throw validation_error("symmetrize: raw array must have n^m entries");
  }
  SymTensor t(n, m);
  std::vector<int> tup(static_cast<size_t>(m), 0);
  std::vector<int> sorted(static_cast<size_t>(m));
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t r = flat;
    for (int a = m - 1; a >= 0; --a) {
      tup[static_cast<size_t>(a)] = static_cast<int>(r % n);
      r /= n;
    }
    sorted = tup;
    std::sort(sorted.begin(), sorted.end());
    t.at(sorted) += raw[static_cast<size_t>(flat)];
  }
  for_each_sym_index(n, m, [&](std::span<const int> idx, std::int64_t pos) {
    t[pos] /= static_cast<double>(sym_multiplicity(idx));
  });
  return t;
}

cplx inner(const SymTensor& f, const SymTensor& g) {
  if (f.dim() != g.dim() || f.rank() != g.rank()) throw validation_error("inner: shape mismatch");
  cplx s = 0.0;
  for_each_sym_index(f.dim(), f.rank(), [&](std::span<const int> idx, std::int64_t pos) {
    s += static_cast<double>(sym_multiplicity(idx)) * f[pos] * std::conj(g[pos]);
  });
  return s;
}

double norm(const SymTensor& f) { return std::sqrt(std::abs(inner(f, f))); }

cplx contract_full(const SymTensor& f, std::span<const cplx> x) {
  if (static_cast<int>(x.size()) != f.dim()) throw validation_error("contract_full: dim mismatch");
  cplx s = 0.0;
  for_each_sym_index(f.dim(), f.rank(), [&](std::span<const int> idx, std::int64_t pos) {
    cplx v = f[pos];
    for (int a : idx) v *= x[static_cast<size_t>(a)];
    s += static_cast<double>(sym_multiplicity(idx)) * v;
  });
  return s;
}

MixedTensor::MixedTensor(int n, int m) : n_(n), m_(m) {
  validate_rank_dim(n, m);
  parts_.reserve(static_cast<size_t>(m + 1));
  for (int p = 0; p <= m; ++p) parts_.emplace_back(n, p);
}

}  // namespace mrt
