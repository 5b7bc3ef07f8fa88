#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace perigid {

enum class ErrorCode {
  LoopEdge,
  DuplicateEdgeOrbit,
  DuplicateVertexOrbit,
  SingularLattice,
  ZeroLengthEdge,
  DimensionMismatch,
  IndexOutOfRange,
  UnknownOrbit,
  IllConditioned,
  NoStress,
  NonUniqueStress,
  ZeroPivot,
  NumericalFailure,
  InvalidDimension,
  FlexDimensionTooLarge,
  NonPointedCone,
  NotAFlex,
  NotExpansive,
  NewtonDivergence,
  SingularJacobianAtPoint,
  NotSimplexFamily,
  ParseError,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LoopEdge: return "LoopEdge";
    case ErrorCode::DuplicateEdgeOrbit: return "DuplicateEdgeOrbit";
    case ErrorCode::DuplicateVertexOrbit: return "DuplicateVertexOrbit";
    case ErrorCode::SingularLattice: return "SingularLattice";
    case ErrorCode::ZeroLengthEdge: return "ZeroLengthEdge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnknownOrbit: return "UnknownOrbit";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NoStress: return "NoStress";
    case ErrorCode::NonUniqueStress: return "NonUniqueStress";
    case ErrorCode::ZeroPivot: return "ZeroPivot";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::FlexDimensionTooLarge: return "FlexDimensionTooLarge";
    case ErrorCode::NonPointedCone: return "NonPointedCone";
    case ErrorCode::NotAFlex: return "NotAFlex";
    case ErrorCode::NotExpansive: return "NotExpansive";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::SingularJacobianAtPoint: return "SingularJacobianAtPoint";
    case ErrorCode::NotSimplexFamily: return "NotSimplexFamily";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace perigid
