#include "minlap/error.hpp"

namespace minlap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::BaseCoincides: return "BaseCoincides";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::DegenerateChart: return "DegenerateChart";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularMass: return "SingularMass";
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::NegativeC: return "NegativeC";
    case ErrorCode::NotIntegrable: return "NotIntegrable";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::ConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

}  // namespace minlap
