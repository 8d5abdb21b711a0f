#include "elvar/errors.hpp"

namespace elvar {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::boundary_weight_nonzero: return "BoundaryWeightNonzero";
    case Errc::nonpositive_interior_weight: return "NonpositiveInteriorWeight";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::tabulated_out_of_range: return "TabulatedOutOfRange";
    case Errc::quadrature_nonconvergent: return "QuadratureNonconvergent";
    case Errc::jacobi_nonconvergent: return "JacobiNonconvergent";
    case Errc::max_iters_exceeded: return "MaxItersExceeded";
    case Errc::singular_jacobian: return "SingularJacobian";
    case Errc::endpoint_not_below_zero: return "EndpointNotBelowZero";
    case Errc::nonpositive_denominator: return "NonpositiveDenominator";
    case Errc::range_invalid: return "RangeInvalid";
    case Errc::empty_sweep: return "EmptySweep";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace elvar
