#include "common/error.hpp"

namespace archbench {

const char *error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_architecture: return "invalid-architecture";
    case ErrorCode::parse: return "parse";
    case ErrorCode::no_neighbor: return "no-neighbor";
    case ErrorCode::unsupported_reduction: return "unsupported-reduction";
    case ErrorCode::format: return "format";
    case ErrorCode::duplicate_key: return "duplicate-key";
    case ErrorCode::missing_arch: return "missing-arch";
    case ErrorCode::epoch: return "epoch";
    case ErrorCode::parameter: return "parameter";
    case ErrorCode::numeric: return "numeric";
    case ErrorCode::undefined_correlation: return "undefined-correlation";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::missing_cell: return "missing-cell";
    case ErrorCode::validation: return "validation";
    case ErrorCode::io: return "io";
    case ErrorCode::exhausted: return "exhausted";
  }
  return "unknown";
}

}  // namespace archbench
