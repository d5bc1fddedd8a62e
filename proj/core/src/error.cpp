#include "psdrank/error.hpp"

namespace psdrank {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "E_PARSE";
    case ErrorCode::unknown_variable: return "E_UNKNOWN_VARIABLE";
    case ErrorCode::missing_binding: return "E_MISSING_BINDING";
    case ErrorCode::zero_polynomial: return "E_ZERO_POLYNOMIAL";
    case ErrorCode::precondition: return "E_PRECONDITION";
    case ErrorCode::out_of_range: return "E_OUT_OF_RANGE";
    case ErrorCode::dimension_mismatch: return "E_DIMENSION";
    case ErrorCode::label_mismatch: return "E_LABEL_MISMATCH";
    case ErrorCode::unsatisfied: return "E_UNSATISFIED";
    case ErrorCode::singular_basis: return "E_SINGULAR_BASIS";
    case ErrorCode::vanishing_coordinate: return "E_VANISHING_COORDINATE";
    case ErrorCode::residual: return "E_RESIDUAL";
    case ErrorCode::rank_deficient: return "E_RANK";
    case ErrorCode::io: return "E_IO";
  }
  return "E_UNKNOWN";
}

}  // namespace psdrank
