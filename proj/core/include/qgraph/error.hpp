#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qgraph {

enum class Errc {
  // graph construction and lookup
  NonPositiveLength,
  DisconnectedGraph,
  IndexOutOfRange,
  ArityMismatch,
  UnknownFamily,
  ParamMismatch,
  // config parsing
  ParseError,
  // vertex M-function
  PoleProximity,
  InfiniteCoupling,
  DivisionNearZero,
  // edge secular / spectrum
  Overflow,
  RankTolDegenerate,
  BudgetExceeded,
  MeshTooCoarse,
  InvalidArgument,
  // isospectral analysis
  SizeMismatch,
  SearchSpaceTooLarge,
  MixedTypes,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qgraph
