#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ridge {

enum class ErrorCode {
  NotPositiveDefinite,
  NotPositiveSemidefinite,
  NoConvergence,
  DimensionMismatch,
  NegativeTrace,
  RankOutOfRange,
  NotSigmaOrthogonal,
  NonStandardMeasure,
  IndexOutOfRange,
  ModelEvaluationFailure,
  NonDiagonalCovariance,
  ZeroVariance,
  SolverFailure,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base class of every exception thrown by the library. The code identifies
/// the failure class; `what()` carries a human-readable description.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::int64_t pivot)
      : Error(ErrorCode::NotPositiveDefinite,
              "non-positive pivot at index " + std::to_string(pivot)),
        pivot_(pivot) {}
  std::int64_t pivot() const noexcept { return pivot_; }

 private:
  std::int64_t pivot_;
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(int sweeps)
      : Error(ErrorCode::NoConvergence,
              "Jacobi iteration did not converge after " + std::to_string(sweeps) + " sweeps"),
        sweeps_(sweeps) {}
  int sweeps() const noexcept { return sweeps_; }

 private:
  int sweeps_;
};

class ModelEvaluationFailure : public Error {
 public:
  ModelEvaluationFailure(std::int64_t sample, const std::string& cause)
      : Error(ErrorCode::ModelEvaluationFailure,
              "model evaluation failed at sample " + std::to_string(sample) + ": " + cause),
        sample_(sample) {}
  std::int64_t sample() const noexcept { return sample_; }

 private:
  std::int64_t sample_;
};

class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& message, double residual)
      : Error(ErrorCode::SolverFailure,
              message + " (relative residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace ridge
