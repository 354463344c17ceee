#include "ridge/format.hpp"

#include "ridge/error.hpp"

#include <array>
#include <charconv>
#include <string_view>

namespace ridge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeTrace: return "NegativeTrace";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::NotSigmaOrthogonal: return "NotSigmaOrthogonal";
    case ErrorCode::NonStandardMeasure: return "NonStandardMeasure";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ModelEvaluationFailure: return "ModelEvaluationFailure";
    case ErrorCode::NonDiagonalCovariance: return "NonDiagonalCovariance";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error(ErrorCode::InvalidArgument, "format_double failed");
  return std::string(buf.data(), end);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::ParseError, "not a floating point number: '" + text + "'");
  }
  return value;
}

}  // namespace ridge
