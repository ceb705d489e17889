#include "tmef/error.hpp"

namespace tmef {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IndexOutOfDomain: return "IndexOutOfDomain";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::UnsupportedKernel: return "UnsupportedKernel";
    case ErrorCode::TransformDiverges: return "TransformDiverges";
    case ErrorCode::MomentsUndefined: return "MomentsUndefined";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NotAvailable: return "NotAvailable";
    case ErrorCode::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorCode::SingularReference: return "SingularReference";
    case ErrorCode::DegenerateSystem: return "DegenerateSystem";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace tmef
