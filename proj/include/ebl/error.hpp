#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ebl {

enum class ErrorCode {
  ZeroNormal,
  NotOnBoundary,
  InsideEllipse,
  ParallelLines,
  DegenerateInput,
  TangentRay,
  NoTangent,
  NoConvergence,
  InvalidN,
  ClosureFailure,
  InvalidArgument,
  DegenerateTriangle,
  InfinitePoint,
  UnsupportedIndex,
  DegenerateDerived,
  ParallelTangents,
  IllConditioned,
  NoIntersection,
  WrongN,
  SelfIntersecting,
  NoConic,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::ZeroNormal: return "ZeroNormal";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::InsideEllipse: return "InsideEllipse";
    case ErrorCode::ParallelLines: return "ParallelLines";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::TangentRay: return "TangentRay";
    case ErrorCode::NoTangent: return "NoTangent";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::ClosureFailure: return "ClosureFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::InfinitePoint: return "InfinitePoint";
    case ErrorCode::UnsupportedIndex: return "UnsupportedIndex";
    case ErrorCode::DegenerateDerived: return "DegenerateDerived";
    case ErrorCode::ParallelTangents: return "ParallelTangents";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::WrongN: return "WrongN";
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::NoConic: return "NoConic";
  }
  return "Unknown";
}

/// Every failing operation in the library throws this, tagged with a code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ebl
