#ifndef MRT_SYM_TENSOR_HPP
#define MRT_SYM_TENSOR_HPP

#include <span>
#include <vector>

#include "mrt/sym_index.hpp"
#include "mrt/types.hpp"

namespace mrt {

// Pointwise symmetric rank-m tensor in dimension n, stored compressed: one
// complex scalar per nondecreasing multi-index, lexicographic order.
class SymTensor {
 public:
  SymTensor() : n_(1), m_(0), c_(1, cplx(0.0)) {}
  SymTensor(int n, int m);

  static SymTensor scalar(int n, cplx value);
  static SymTensor kronecker(int n);                         // delta_ij
  static SymTensor vector(std::span<const cplx> x);          // rank 1
  static SymTensor vector_power(std::span<const cplx> x, int m);  // x^{tensor m}

  int dim() const { return n_; }
  int rank() const { return m_; }
  std::int64_t size() const { return static_cast<std::int64_t>(c_.size()); }

  cplx& operator[](std::int64_t pos) { return c_[static_cast<size_t>(pos)]; }
  const cplx& operator[](std::int64_t pos) const { return c_[static_cast<size_t>(pos)]; }

  cplx at(std::span<const int> idx) const { return c_[static_cast<size_t>(sym_position(n_, idx))]; }
  cplx& at(std::span<const int> idx) { return c_[static_cast<size_t>(sym_position(n_, idx))]; }

  std::span<const cplx> components() const { return c_; }
  std::span<cplx> components() { return c_; }

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(cplx s);
  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(SymTensor a, cplx s) { return a *= s; }
  friend SymTensor operator*(cplx s, SymTensor a) { return a *= s; }

  // Expand to the full n^m array, row-major over (i_1,...,i_m).
  std::vector<cplx> expand_full() const;

 private:
  int n_;
  int m_;
  std::vector<cplx> c_;
};

// Symmetrization of an arbitrary full rank-m array (n^m entries, row-major):
// result[idx] = average of raw over all permutations of idx. Idempotent on
// symmetric input.
SymTensor symmetrize(std::span<const cplx> raw, int n, int m);

// Multiplicity-weighted pairing; equals the Frobenius pairing of the full
// tensors. Sesquilinear (conjugates g).
cplx inner(const SymTensor& f, const SymTensor& g);

double norm(const SymTensor& f);

// Full contraction f_{i_1..i_m} x_{i_1} ... x_{i_m}; bilinear (no conjugation).
cplx contract_full(const SymTensor& f, std::span<const cplx> x);

// Direct sum F = f^(0) + f^(1) + ... + f^(m) of symmetric tensors of all
// ranks 0..m sharing one dimension.
class MixedTensor {
 public:
  MixedTensor(int n, int m);

  int dim() const { return n_; }
  int max_rank() const { return m_; }
  SymTensor& part(int p) { return parts_[static_cast<size_t>(p)]; }
  const SymTensor& part(int p) const { return parts_[static_cast<size_t>(p)]; }

 private:
  int n_;
  int m_;
  std::vector<SymTensor> parts_;
};

}  // namespace mrt

#endif
