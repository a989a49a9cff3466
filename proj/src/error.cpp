#include "casimir/error.hpp"
#include "casimir/units.hpp"

namespace casimir {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Range: return "out of range";
    case ErrorCode::UnsupportedModel: return "unsupported model";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::Accuracy: return "accuracy";
    case ErrorCode::Consistency: return "consistency";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::Io: return "i/o";
  }
  return "unknown";
}

std::string_view to_string(UnitSystem u) noexcept {
  return u == UnitSystem::SI ? "si" : "natural";
}

}  // namespace casimir
