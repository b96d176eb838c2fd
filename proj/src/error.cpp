#include "kgsim/error.hpp"

namespace kgsim {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::MalformedSamples: return "MalformedSamples";
    case Errc::BadVariableIndex: return "BadVariableIndex";
    case Errc::OverlappingSets: return "OverlappingSets";
    case Errc::EmptySet: return "EmptySet";
    case Errc::SelfNotInKnowledgeSet: return "SelfNotInKnowledgeSet";
    case Errc::DuplicateVariable: return "DuplicateVariable";
    case Errc::ParseError: return "ParseError";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::DuplicateObservation: return "DuplicateObservation";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::TooFewNodes: return "TooFewNodes";
    case Errc::CouldNotConnect: return "CouldNotConnect";
    case Errc::InvalidEdge: return "InvalidEdge";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::NotConnected: return "NotConnected";
    case Errc::SelfEncounter: return "SelfEncounter";
    case Errc::NotAnEdge: return "NotAnEdge";
    case Errc::InvalidSchedule: return "InvalidSchedule";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::InternalConsistency: return "InternalConsistency";
  }
  return "Unknown";
}

namespace {

std::string decorate(Errc code, const std::string& what, std::optional<std::size_t> line) {
  std::string out(errc_name(code));
  if (line) out += " (line " + std::to_string(*line) + ")";
  if (!what.empty()) out += ": " + what;
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& what, std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, what, line)), code_(code), line_(line) {}

}  // namespace kgsim
