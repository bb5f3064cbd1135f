#include "clue/decision.hpp"

#include "clue/errors.hpp"

namespace clue {

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::Deduce: return "deduce";
    case Phase::Act: return "act";
    case Phase::ShowCard: return "show";
  }
  return "?";
}

Phase parse_phase(std::string_view s) {
  if (s == "deduce") return Phase::Deduce;
  if (s == "act") return Phase::Act;
  if (s == "show") return Phase::ShowCard;
  throw Error("unknown phase '" + std::string(s) + "'");
}

const std::string& AgentDecision::raw_text() const {
  static const std::string empty;
  return attempts.empty() ? empty : attempts.back().text;
}

AgentDecision fallback_decision(Phase phase, std::vector<Attempt> attempts) {
  AgentDecision d;
  d.phase = phase;
  d.attempts = std::move(attempts);
  d.fell_back = true;
  return d;
}

}  // namespace clue
