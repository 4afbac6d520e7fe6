#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curved2body {

enum class ErrorKind {
  OutOfInterval,
  SingularArgument,
  NotOnSurface,
  NegativeCurvature,
  NonzeroCurvature,
  LeftDomain,
  StepFailure,
  NoConvergence,
  WrongBranch,
  NoRoot,
  ForceNotZero,
  RightAngleUnequalMasses,
  RankDeficientLeaf,
  BranchLost,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Domain failure raised by any numerical operation in the toolkit.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfInterval: return "OutOfInterval";
    case ErrorKind::SingularArgument: return "SingularArgument";
    case ErrorKind::NotOnSurface: return "NotOnSurface";
    case ErrorKind::NegativeCurvature: return "NegativeCurvature";
    case ErrorKind::NonzeroCurvature: return "NonzeroCurvature";
    case ErrorKind::LeftDomain: return "LeftDomain";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::WrongBranch: return "WrongBranch";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::ForceNotZero: return "ForceNotZero";
    case ErrorKind::RightAngleUnequalMasses: return "RightAngleUnequalMasses";
    case ErrorKind::RankDeficientLeaf: return "RankDeficientLeaf";
    case ErrorKind::BranchLost: return "BranchLost";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace curved2body
