#include "mrt/sym_index.hpp"

#include <array>

namespace mrt {

namespace {

constexpr int kPascalSize = 40;

constexpr auto make_pascal() {
  std::array<std::array<std::int64_t, kPascalSize>, kPascalSize> t{};
  for (int i = 0; i < kPascalSize; ++i) {
    t[static_cast<size_t>(i)][0] = 1;
    for (int j = 1; j <= i; ++j) {
      t[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          t[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] +
          (j <= i - 1 ? t[static_cast<size_t>(i - 1)][static_cast<size_t>(j)] : 0);
    }
  }
  return t;
}

constexpr auto kPascal = make_pascal();

constexpr std::array<std::int64_t, 21> kFactorial = [] {
  std::array<std::int64_t, 21> f{};
  f[0] = 1;
  for (int i = 1; i <= 20; ++i) f[static_cast<size_t>(i)] = f[static_cast<size_t>(i - 1)] * i;
  return f;
}();

}  // namespace

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (n < kPascalSize) return kPascal[static_cast<size_t>(n)][static_cast<size_t>(k)];
  std::int64_t r = 1;
  if (k > n - k) k = n - k;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

std::int64_t sym_component_count(int n, int m) { return binomial(n + m - 1, m); }

std::int64_t sym_position(int n, std::span<const int> idx) {
  const int m = static_cast<int>(idx.size());
  std::int64_t pos = 0;
  int prev = 0;
  for (int t = 0; t < m; ++t) {
    const int tail = m - t - 1;
    for (int j = prev; j < idx[static_cast<size_t>(t)]; ++j) {
      pos += binomial(n - j - 1 + tail, tail);
    }
    prev = idx[static_cast<size_t>(t)];
  }
  return pos;
}

std::vector<int> sym_index_at(int n, int m, std::int64_t pos) {
  std::vector<int> idx(static_cast<size_t>(m));
  int prev = 0;
  for (int t = 0; t < m; ++t) {
    const int tail = m - t - 1;
    int j = prev;
    while (true) {
      const std::int64_t block = binomial(n - j - 1 + tail, tail);
      if (pos < block) break;
      pos -= block;
      ++j;
    }
    idx[static_cast<size_t>(t)] = j;
    prev = j;
  }
  return idx;
}

std::int64_t sym_multiplicity(std::span<const int> idx) {
  const int m = static_cast<int>(idx.size());
  std::int64_t denom = 1;
  int run = 1;
  for (int t = 1; t < m; ++t) {
    if (idx[static_cast<size_t>(t)] == idx[static_cast<size_t>(t - 1)]) {
      ++run;
    } else {
      denom *= kFactorial[static_cast<size_t>(run)];
      run = 1;
    }
  }
  denom *= kFactorial[static_cast<size_t>(run)];
  if (m == 0) return 1;
  return kFactorial[static_cast<size_t>(m)] / denom;
}

void validate_rank_dim(int n, int m) {
  if (n < 1 || n > kMaxDim) throw validation_error("dimension must be in 1.." + std::to_string(kMaxDim));
  if (m < 0 || m > kMaxRank) throw validation_error("rank must be in 0.." + std::to_string(kMaxRank));
}

}  // namespace mrt
