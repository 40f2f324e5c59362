#include "mrt/tensor_ops.hpp"

#include <Eigen/Dense>

namespace mrt {

namespace {

// Removes two entries equal to c from idx (which contains them).
std::vector<int> drop_pair(std::span<const int> idx, int c) {
  std::vector<int> out;
  out.reserve(idx.size() - 2);
  int dropped = 0;
  for (int a : idx) {
    if (a == c && dropped < 2) {
      ++dropped;
      continue;
    }
    out.push_back(a);
  }
  return out;
}

std::vector<int> drop_one(std::span<const int> idx, int c) {
  std::vector<int> out;
  out.reserve(idx.size() - 1);
  bool dropped = false;
  for (int a : idx) {
    if (a == c && !dropped) {
      dropped = true;
      continue;
    }
    out.push_back(a);
  }
  return out;
}

std::vector<int> insert_sorted(std::span<const int> idx, int c) {
  std::vector<int> out(idx.begin(), idx.end());
  out.insert(std::lower_bound(out.begin(), out.end(), c), c);
  return out;
}

Eigen::MatrixXd jdelta_idelta_matrix(int n, int m) {
  const auto dim = sym_component_count(n, m);
  Eigen::MatrixXd M(dim, dim);
  for (std::int64_t col = 0; col < dim; ++col) {
    SymTensor e(n, m);
    e[col] = 1.0;
    const SymTensor img = j_delta(i_delta(e));
    for (std::int64_t row = 0; row < dim; ++row) M(row, col) = img[row].real();
  }
  return M;
}

}  // namespace

SymTensor i_delta(const SymTensor& f) {
  const int n = f.dim();
  const int m = f.rank();
  SymTensor out(n, m + 2);
  for_each_sym_index(n, m + 2, [&](std::span<const int> idx, std::int64_t pos) {
    cplx acc = 0.0;
    int t = 0;
    const int len = static_cast<int>(idx.size());
    while (t < len) {
      int t2 = t;
      while (t2 < len && idx[static_cast<size_t>(t2)] == idx[static_cast<size_t>(t)]) ++t2;
      if (t2 - t >= 2) {
        const auto rest = drop_pair(idx, idx[static_cast<size_t>(t)]);
        acc += static_cast<double>(sym_multiplicity(rest)) * f.at(rest);
      }
      t = t2;
    }
    out[pos] = acc / static_cast<double>(sym_multiplicity(idx));
  });
  return out;
}

SymTensor j_delta(const SymTensor& f) {
  const int n = f.dim();
  const int m = f.rank();
  if (m <= 1) return SymTensor(n, 0);
  SymTensor out(n, m - 2);
  for_each_sym_index(n, m - 2, [&](std::span<const int> idx, std::int64_t pos) {
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
      auto full = insert_sorted(idx, k);
      full = insert_sorted(full, k);
      acc += f.at(full);
    }
    out[pos] = acc;
  });
  return out;
}

SymTensor i_vec(const SymTensor& f, std::span<const cplx> x) {
  const int n = f.dim();
  const int m = f.rank();
  if (static_cast<int>(x.size()) != n) throw validation_error("i_vec: dim mismatch");
  SymTensor out(n, m + 1);
  for_each_sym_index(n, m + 1, [&](std::span<const int> idx, std::int64_t pos) {
    cplx acc = 0.0;
    const int len = static_cast<int>(idx.size());
    for (int t = 0; t < len; ++t) {
      if (t > 0 && idx[static_cast<size_t>(t)] == idx[static_cast<size_t>(t - 1)]) continue;
      const int c = idx[static_cast<size_t>(t)];
      const auto rest = drop_one(idx, c);
      acc += static_cast<double>(sym_multiplicity(rest)) * f.at(rest) * x[static_cast<size_t>(c)];
    }
    out[pos] = acc / static_cast<double>(sym_multiplicity(idx));
  });
  return out;
}

SymTensor i_vec(const SymTensor& f, std::span<const double> x) {
  std::vector<cplx> xc(x.begin(), x.end());
  return i_vec(f, std::span<const cplx>(xc));
}

SymTensor j_vec(const SymTensor& f, std::span<const cplx> x) {
  const int n = f.dim();
  const int m = f.rank();
  if (m == 0) throw validation_error("j_vec: rank must be >= 1");
  if (static_cast<int>(x.size()) != n) throw validation_error("j_vec: dim mismatch");
  SymTensor out(n, m - 1);
  for_each_sym_index(n, m - 1, [&](std::span<const int> idx, std::int64_t pos) {
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
      acc += f.at(insert_sorted(idx, k)) * x[static_cast<size_t>(k)];
    }
    out[pos] = acc;
  });
  return out;
}

SymTensor j_vec(const SymTensor& f, std::span<const double> x) {
  std::vector<cplx> xc(x.begin(), x.end());
  return j_vec(f, std::span<const cplx>(xc));
}

SymTensor i_delta_pow(SymTensor f, int k) {
  for (int i = 0; i < k; ++i) f = i_delta(f);
  return f;
}

SymTensor project_trace_free(const SymTensor& f) {
  if (f.rank() <= 1) return f;
  return f - i_delta(jdelta_idelta_solve(j_delta(f)));
}

SymTensor jdelta_idelta_solve(const SymTensor& g) {
  const int n = g.dim();
  const int m = g.rank();
  const auto dim = sym_component_count(n, m);
  const Eigen::MatrixXd M = jdelta_idelta_matrix(n, m);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  if (std::abs(lu.determinant()) < 1e-300) {
    throw numeric_guard_error("jdelta_idelta_solve: singular operator (internal failure)");
  }
  Eigen::VectorXd re(dim), im(dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    re(i) = g[i].real();
    im(i) = g[i].imag();
  }
  const Eigen::VectorXd xr = lu.solve(re);
  const Eigen::VectorXd xi = lu.solve(im);
  SymTensor out(n, m);
  for (std::int64_t i = 0; i < dim; ++i) out[i] = cplx(xr(i), xi(i));
  return out;
}

std::vector<SymTensor> trace_free_decompose(const SymTensor& f) {
  const int l = f.rank();
  std::vector<SymTensor> parts;
  parts.reserve(static_cast<size_t>(l / 2 + 1));
  SymTensor rest = f;
  for (int k = 0; k <= l / 2; ++k) {
    parts.push_back(project_trace_free(rest));
    if (rest.rank() >= 2) rest = jdelta_idelta_solve(j_delta(rest));
  }
  return parts;
}

SymTensor PointwiseMap::apply(const SymTensor& f, int n, int rank_out) const {
  SymTensor out(n, rank_out);
  for (int r = 0; r < rows; ++r) {
    cplx acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += entry(r, c) * f[c];
    out[r] = acc;
  }
  return out;
}

PointwiseMap make_pointwise_map(int n, int m_in, int rank_out,
                                const std::function<SymTensor(const SymTensor&)>& op) {
  PointwiseMap map;
  map.cols = static_cast<int>(sym_component_count(n, m_in));
  map.rows = static_cast<int>(sym_component_count(n, rank_out));
  map.w.assign(static_cast<size_t>(map.rows) * static_cast<size_t>(map.cols), cplx(0.0));
  for (int c = 0; c < map.cols; ++c) {
    SymTensor e(n, m_in);
    e[c] = 1.0;
    const SymTensor img = op(e);
    if (img.rank() != rank_out) throw validation_error("make_pointwise_map: rank mismatch");
    for (int r = 0; r < map.rows; ++r) {
      map.w[static_cast<size_t>(r) * static_cast<size_t>(map.cols) + static_cast<size_t>(c)] = img[r];
    }
  }
  return map;
}

PointwiseMap map_i_delta(int n, int m) {
  return make_pointwise_map(n, m, m + 2, [](const SymTensor& f) { return i_delta(f); });
}

PointwiseMap map_j_delta(int n, int m) {
  return make_pointwise_map(n, m, m >= 2 ? m - 2 : 0, [](const SymTensor& f) { return j_delta(f); });
}

PointwiseMap map_projection(int n, int m) {
  return make_pointwise_map(n, m, m, [](const SymTensor& f) { return project_trace_free(f); });
}

PointwiseMap map_jdelta_idelta_inverse(int n, int m) {
  return make_pointwise_map(n, m, m, [](const SymTensor& f) { return jdelta_idelta_solve(f); });
}

}  // namespace mrt
