#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace quasilat {

enum class ErrorKind {
  kRadicandMismatch,
  kDimensionMismatch,
  kOverflow,
  kEmptyPatch,
  kInsufficientWindow,
  kBoundaryUnsound,
  kThresholdTooSmall,
  kDegenerateWindow,
  kDegenerateDensity,
  kNotARoot,
  kNonMonic,
  kNonSquare,
  kInvalidArgument,
  kParse,
};

// Stable kebab-case tag, e.g. "insufficient-window". The CLI prints it verbatim.
std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace quasilat
