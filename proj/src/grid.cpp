#include "mrt/grid.hpp"

#include <algorithm>
#include <cmath>

namespace mrt {

namespace {
constexpr std::int64_t kMaxPoints = 10'000'000;
}

GridDomain::GridDomain(std::vector<int> dims, std::vector<double> spacing, std::vector<double> origin)
    : dims_(std::move(dims)), h_(std::move(spacing)), origin_(std::move(origin)) {
  const size_t n = dims_.size();
  if (n == 0 || h_.size() != n || origin_.size() != n) throw validation_error("grid: inconsistent axis counts");
  npts_ = 1;
  for (size_t a = 0; a < n; ++a) {
    if (dims_[a] < 1) throw validation_error("grid: each axis needs at least one point");
    if (h_[a] <= 0.0) throw validation_error("grid: spacing must be positive");
    npts_ *= dims_[a];
    if (npts_ > kMaxPoints) throw numeric_guard_error("grid: total points exceed the desk-scale guard");
  }
  strides_.assign(n, 1);
  for (int a = static_cast<int>(n) - 2; a >= 0; --a) {
    strides_[static_cast<size_t>(a)] = strides_[static_cast<size_t>(a + 1)] * dims_[static_cast<size_t>(a + 1)];
  }
}

GridDomain GridDomain::cube(int n, int points_per_axis, double half_width) {
  if (points_per_axis < 2) throw validation_error("grid: need at least two points per axis");
  const double h = 2.0 * half_width / (points_per_axis - 1);
  return GridDomain(std::vector<int>(static_cast<size_t>(n), points_per_axis),
                    std::vector<double>(static_cast<size_t>(n), h),
                    std::vector<double>(static_cast<size_t>(n), -half_width));
}

double GridDomain::min_spacing() const { return *std::min_element(h_.begin(), h_.end()); }

std::int64_t GridDomain::flatten(std::span<const int> iv) const {
  std::int64_t p = 0;
  for (size_t a = 0; a < dims_.size(); ++a) p += strides_[a] * iv[a];
  return p;
}

std::vector<int> GridDomain::unflatten(std::int64_t p) const {
  std::vector<int> iv(dims_.size());
  unflatten_into(p, iv);
  return iv;
}

void GridDomain::unflatten_into(std::int64_t p, std::span<int> iv) const {
  for (size_t a = 0; a < dims_.size(); ++a) {
    iv[a] = static_cast<int>(p / strides_[a]);
    p %= strides_[a];
  }
}

std::vector<double> GridDomain::point(std::span<const int> iv) const {
  std::vector<double> x(dims_.size());
  for (size_t a = 0; a < dims_.size(); ++a) x[a] = origin_[a] + h_[a] * iv[a];
  return x;
}

std::vector<double> GridDomain::box_max() const {
  std::vector<double> x(dims_.size());
  for (size_t a = 0; a < dims_.size(); ++a) x[a] = origin_[a] + h_[a] * (dims_[a] - 1);
  return x;
}

bool GridDomain::same_as(const GridDomain& o) const {
  if (dims_ != o.dims_) return false;
  for (size_t a = 0; a < h_.size(); ++a) {
    if (std::abs(h_[a] - o.h_[a]) > 1e-12 || std::abs(origin_[a] - o.origin_[a]) > 1e-12) return false;
  }
  return true;
}

}  // namespace mrt
