#include "quasilat/error.hpp"

namespace quasilat {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kRadicandMismatch: return "radicand-mismatch";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kOverflow: return "overflow";
    case ErrorKind::kEmptyPatch: return "empty-patch";
    case ErrorKind::kInsufficientWindow: return "insufficient-window";
    case ErrorKind::kBoundaryUnsound: return "boundary-unsound";
    case ErrorKind::kThresholdTooSmall: return "threshold-too-small";
    case ErrorKind::kDegenerateWindow: return "degenerate-window";
    case ErrorKind::kDegenerateDensity: return "degenerate-density";
    case ErrorKind::kNotARoot: return "not-a-root";
    case ErrorKind::kNonMonic: return "non-monic";
    case ErrorKind::kNonSquare: return "non-square";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kParse: return "parse-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace quasilat
