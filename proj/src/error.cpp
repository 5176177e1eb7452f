#include "immcam/error.hpp"

namespace immcam {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSequence: return "invalid_sequence";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::Io: return "io_error";
    case ErrorCode::BlankShot: return "blank_shot";
    case ErrorCode::UndefinedMetric: return "undefined_metric";
    case ErrorCode::Calibration: return "calibration_failed";
    case ErrorCode::AdjustmentFailed: return "adjustment_failed";
  }
  return "unknown";
}

}  // namespace immcam
