#ifndef MRT_SYM_INDEX_HPP
#define MRT_SYM_INDEX_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mrt/types.hpp"

namespace mrt {

// Multi-indices of a symmetric rank-m tensor in dimension n are stored as
// nondecreasing sequences of m axis labels in {0..n-1}, enumerated in
// lexicographic order. Position 0 is (0,0,...,0).

inline constexpr int kMaxRank = 8;
inline constexpr int kMaxDim = 6;

std::int64_t binomial(int n, int k);

// Number of distinct components C(n+m-1, m).
std::int64_t sym_component_count(int n, int m);

// Lexicographic position of a nondecreasing multi-index.
std::int64_t sym_position(int n, std::span<const int> idx);

// Inverse of sym_position.
std::vector<int> sym_index_at(int n, int m, std::int64_t pos);

// Number of distinct permutations of idx (multinomial m! / prod counts!).
std::int64_t sym_multiplicity(std::span<const int> idx);

// Calls fn(idx, pos) for every nondecreasing multi-index of length m.
template <typename Fn>
void for_each_sym_index(int n, int m, Fn&& fn) {
  std::vector<int> idx(static_cast<size_t>(m), 0);
  std::int64_t pos = 0;
  while (true) {
    fn(std::span<const int>(idx), pos);
    ++pos;
    int a = m - 1;
    while (a >= 0 && idx[static_cast<size_t>(a)] == n - 1) --a;
    if (a < 0) break;
    int v = idx[static_cast<size_t>(a)] + 1;
    for (int b = a; b < m; ++b) idx[static_cast<size_t>(b)] = v;
  }
}

void validate_rank_dim(int n, int m);

}  // namespace mrt

#endif
