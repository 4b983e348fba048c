#include "zgunits/error.hpp"

namespace zgunits {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotASublattice: return "NotASublattice";
    case ErrorKind::ConductorMismatch: return "ConductorMismatch";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::PrecisionUnachievable: return "PrecisionUnachievable";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::HalfPowerUndefined: return "HalfPowerUndefined";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::EnumerationBoundExceeded: return "EnumerationBoundExceeded";
    case ErrorKind::UnsupportedConductor: return "UnsupportedConductor";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::NotASubgroup: return "NotASubgroup";
    case ErrorKind::NotInImage: return "NotInImage";
    case ErrorKind::NotInSubgroup: return "NotInSubgroup";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace zgunits
