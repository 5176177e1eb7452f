#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace immcam {

enum class ErrorCode {
  InvalidSequence,
  InvalidArgument,
  Parse,
  Io,
  BlankShot,
  UndefinedMetric,
  Calibration,
  AdjustmentFailed,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. `context` carries a short machine-readable locator
/// (field path, frame index, achieved values) that the CLI forwards verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string context = {})
      : std::runtime_error(message), code_(code), context_(std::move(context)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorCode code_;
  std::string context_;
};

}  // namespace immcam
