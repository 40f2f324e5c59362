#ifndef MRT_TENSOR_OPS_HPP
#define MRT_TENSOR_OPS_HPP

#include <functional>
#include <span>
#include <vector>

#include "mrt/sym_tensor.hpp"

namespace mrt {

// sigma(f otimes delta): S^m -> S^{m+2}
SymTensor i_delta(const SymTensor& f);

// trace over the last two slots: S^m -> S^{max(m-2,0)}; zero for m in {0,1}
SymTensor j_delta(const SymTensor& f);

// sigma(f otimes x): S^m -> S^{m+1}
SymTensor i_vec(const SymTensor& f, std::span<const cplx> x);
SymTensor i_vec(const SymTensor& f, std::span<const double> x);

// contraction of the last slot with x: S^m -> S^{m-1}; error for m = 0
SymTensor j_vec(const SymTensor& f, std::span<const cplx> x);
SymTensor j_vec(const SymTensor& f, std::span<const double> x);

SymTensor i_delta_pow(SymTensor f, int k);

// Orthogonal projection onto trace-free tensors, p = Id - i_d (j_d i_d)^{-1} j_d.
// Identity for m <= 1.
SymTensor project_trace_free(const SymTensor& f);

// Solves (j_delta . i_delta) x = g on S^m.
SymTensor jdelta_idelta_solve(const SymTensor& g);

// f = sum_k i_delta^k b[k] with every b[k] trace-free; b[k] has rank l - 2k.
std::vector<SymTensor> trace_free_decompose(const SymTensor& f);

// Dense matrix of a pointwise linear map between compressed component spaces,
// built column-by-column from basis images. Row-major storage.
struct PointwiseMap {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> w;

  cplx entry(int r, int c) const { return w[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
  SymTensor apply(const SymTensor& f, int n, int rank_out) const;
};

PointwiseMap make_pointwise_map(int n, int m_in, int rank_out,
                                const std::function<SymTensor(const SymTensor&)>& op);

PointwiseMap map_i_delta(int n, int m);
PointwiseMap map_j_delta(int n, int m);
PointwiseMap map_projection(int n, int m);
// Matrix of (j_delta . i_delta)^{-1} on S^m.
PointwiseMap map_jdelta_idelta_inverse(int n, int m);

}  // namespace mrt

#endif
