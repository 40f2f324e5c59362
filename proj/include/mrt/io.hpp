#ifndef MRT_IO_HPP
#define MRT_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "mrt/ray_transform.hpp"
#include "mrt/tensor_field.hpp"

namespace mrt {

// STF container: one JSON header line
//   {"version":1,"n":..,"m":..,"dims":[..],"spacing":[..],"origin":[..],
//    "component_order":"lex-nondecreasing","scalar":"complex","encoding":..}
// followed by the value array in point-major order (grid points row-major
// with axis 0 slowest; per point the compressed components in lexicographic
// order; re,im pairs). encoding "text" stores whitespace-separated decimals,
// "binary-le" stores little-endian doubles.
void write_stf(const std::string& path, const TensorField& f, bool binary = false);
TensorField read_stf(const std::string& path);

// Ray-table CSV: x_1..x_n, xi_1..xi_n, k, value_re, value_im.
void write_ray_table(const std::string& path, const std::vector<Ray>& rays,
                     const std::vector<cplx>& values);
std::pair<std::vector<Ray>, std::vector<cplx>> read_ray_table(const std::string& path, int n);

// Flat key-value report, one "name value" pair per line.
void write_report(const std::string& path, const std::vector<std::pair<std::string, double>>& metrics);

// Whole-file atomic write (temp file + rename).
void atomic_write(const std::string& path, const std::string& contents);

}  // namespace mrt

#endif
