#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kgsim {

enum class Errc {
  EmptyInput,
  MalformedSamples,
  BadVariableIndex,
  OverlappingSets,
  EmptySet,
  SelfNotInKnowledgeSet,
  DuplicateVariable,
  ParseError,
  OutOfRange,
  DuplicateObservation,
  InvalidConfig,
  TooFewNodes,
  CouldNotConnect,
  InvalidEdge,
  SelfLoop,
  NotConnected,
  SelfEncounter,
  NotAnEdge,
  InvalidSchedule,
  ShapeMismatch,
  TooLarge,
  InternalConsistency,
};

std::string_view errc_name(Errc code) noexcept;

// Every failure in the library surfaces as this exception. `line()` is set
// only for errors raised while reading text input.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<std::size_t> line = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  Errc code_;
  std::optional<std::size_t> line_;
};

}  // namespace kgsim
