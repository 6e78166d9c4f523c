#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace s2n {

enum class ErrorCode {
  MissingFile,
  Io,
  Parse,
  NodeIdOutOfRange,
  SelfLoopRejected,
  AsymmetricEdgeList,
  DuplicateEdge,
  ValidationFailed,
  DegenerateGraph,
  InfeasibleConfig,
  EmptyInput,
  EmptySplit,
  EmptyMemberSet,
  NoEdges,
  AllNodesIsolated,
  WrongLabelKind,
  ShapeMismatch,
  ClockUnavailable,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

// Stable machine-parseable prefix used on stderr by the CLI
// (E_IO, E_PARSE, E_VALIDATE, E_SHAPE).
std::string_view error_prefix(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace s2n
