#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "clue/cards.hpp"

namespace clue {

enum class Phase { Deduce, Act, ShowCard };

std::string_view phase_name(Phase p);
Phase parse_phase(std::string_view s);

inline constexpr int kMaxAttempts = 3;

// ANALYSIS / DEDUCED_CARDS. An empty card set is the explicit NONE.
struct DeductionClaim {
  std::string analysis;
  CardSet cards;
  bool operator==(const DeductionClaim&) const = default;
};

// SUMMARY / REASONING / SUGGESTION / ACCUSATION.
struct Move {
  std::string summary;
  std::string reasoning;
  Triple suggestion;
  std::optional<Triple> accusation;
  bool operator==(const Move&) const = default;
};

// REASONING / SHOW.
struct Show {
  std::string reasoning;
  Card card;
  bool operator==(const Show&) const = default;
};

using Parsed = std::variant<std::monostate, DeductionClaim, Move, Show>;

// One response. `error` is set when the model call itself failed (timeout,
// transport, provider status); `parse_error` when the text was rejected.
struct Attempt {
  std::string text;
  std::string error;
  std::string parse_error;
  bool ok() const { return error.empty() && parse_error.empty(); }
  bool operator==(const Attempt&) const = default;
};

struct AgentDecision {
  Phase phase = Phase::Deduce;
  std::vector<Attempt> attempts;
  Parsed parsed;
  bool fell_back = false;

  const std::string& raw_text() const;
  int attempt_count() const { return static_cast<int>(attempts.size()); }
  bool operator==(const AgentDecision&) const = default;
};

AgentDecision fallback_decision(Phase phase, std::vector<Attempt> attempts);

}  // namespace clue
