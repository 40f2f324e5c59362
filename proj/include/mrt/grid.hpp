#ifndef MRT_GRID_HPP
#define MRT_GRID_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mrt/types.hpp"

namespace mrt {

// Uniform grid over a box in R^n. Axis 0 is the slowest-varying index in the
// flattened point order.
class GridDomain {
 public:
  GridDomain() = default;
  GridDomain(std::vector<int> dims, std::vector<double> spacing, std::vector<double> origin);

  // Symmetric box [-half, half]^n with the given number of points per axis.
  static GridDomain cube(int n, int points_per_axis, double half_width = 1.0);

  int dim() const { return static_cast<int>(dims_.size()); }
  std::int64_t num_points() const { return npts_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<double>& spacing() const { return h_; }
  const std::vector<double>& origin() const { return origin_; }
  double min_spacing() const;

  std::int64_t flatten(std::span<const int> iv) const;
  std::vector<int> unflatten(std::int64_t p) const;
  void unflatten_into(std::int64_t p, std::span<int> iv) const;

  // Coordinates of a grid node.
  std::vector<double> point(std::span<const int> iv) const;
  double coord(int axis, int index) const { return origin_[static_cast<size_t>(axis)] + h_[static_cast<size_t>(axis)] * index; }

  // Box corners (node positions, not cell-extended).
  std::vector<double> box_min() const { return origin_; }
  std::vector<double> box_max() const;

  bool same_as(const GridDomain& o) const;

 private:
  std::vector<int> dims_;
  std::vector<double> h_;
  std::vector<double> origin_;
  std::vector<std::int64_t> strides_;
  std::int64_t npts_ = 0;
};

}  // namespace mrt

#endif
