#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mlat {

enum class ErrorCode {
  InvalidInput,
  TooFewSatellites,
  DuplicateSatellites,
  CoplanarSatellites,
  WrongSatelliteCount,
  ColumnRankDeficient,
  NotSymmetric,
  NoSolution,
  DegenerateQuadratic,
  DegenerateQuadric,
  InconsistentReduction,
  DegenerateSampling,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::TooFewSatellites: return "TooFewSatellites";
    case ErrorCode::DuplicateSatellites: return "DuplicateSatellites";
    case ErrorCode::CoplanarSatellites: return "CoplanarSatellites";
    case ErrorCode::WrongSatelliteCount: return "WrongSatelliteCount";
    case ErrorCode::ColumnRankDeficient: return "ColumnRankDeficient";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::DegenerateQuadratic: return "DegenerateQuadratic";
    case ErrorCode::DegenerateQuadric: return "DegenerateQuadric";
    case ErrorCode::InconsistentReduction: return "InconsistentReduction";
    case ErrorCode::DegenerateSampling: return "DegenerateSampling";
  }
  return "Unknown";
}

// Errors caused by the caller's data, as opposed to numerical conditions.
inline bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::TooFewSatellites:
    case ErrorCode::DuplicateSatellites:
    case ErrorCode::CoplanarSatellites:
    case ErrorCode::WrongSatelliteCount:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mlat
