#include "s2n/error.hpp"

namespace s2n {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::NodeIdOutOfRange: return "NodeIdOutOfRange";
    case ErrorCode::SelfLoopRejected: return "SelfLoopRejected";
    case ErrorCode::AsymmetricEdgeList: return "AsymmetricEdgeList";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::DegenerateGraph: return "DegenerateGraph";
    case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptySplit: return "EmptySplit";
    case ErrorCode::EmptyMemberSet: return "EmptyMemberSet";
    case ErrorCode::NoEdges: return "NoEdges";
    case ErrorCode::AllNodesIsolated: return "AllNodesIsolated";
    case ErrorCode::WrongLabelKind: return "WrongLabelKind";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ClockUnavailable: return "ClockUnavailable";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

std::string_view error_prefix(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile:
    case ErrorCode::Io:
    case ErrorCode::ClockUnavailable:
      return "E_IO";
    case ErrorCode::Parse:
    case ErrorCode::InvalidConfig:
      return "E_PARSE";
    case ErrorCode::ShapeMismatch:
      return "E_SHAPE";
    default:
      return "E_VALIDATE";
  }
}

}  // namespace s2n
