#ifndef MRT_TYPES_HPP
#define MRT_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace mrt {

using cplx = std::complex<double>;

// Bad arguments, malformed files, unsupported ranks. CLI maps this to exit 2.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Size guards, non-convergence, singular systems. CLI maps this to exit 3.
class numeric_guard_error : public std::runtime_error {
 public:
  explicit numeric_guard_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mrt

#endif
