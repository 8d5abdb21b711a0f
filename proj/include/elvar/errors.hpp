#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace elvar {

enum class Errc {
  boundary_weight_nonzero,
  nonpositive_interior_weight,
  index_out_of_range,
  shape_mismatch,
  tabulated_out_of_range,
  quadrature_nonconvergent,
  jacobi_nonconvergent,
  max_iters_exceeded,
  singular_jacobian,
  endpoint_not_below_zero,
  nonpositive_denominator,
  range_invalid,
  empty_sweep,
  parse_error,
  validation_error,
  invalid_argument,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace elvar
