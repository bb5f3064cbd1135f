#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clue/cards.hpp"
#include "clue/decision.hpp"
#include "clue/deduction.hpp"
#include "clue/game.hpp"
#include "clue/view.hpp"

namespace clue {

struct PromptContext {
  PlayerView view;
  DerivedInfo derived;
  CardSet unknown_cards;  // deck minus hand, shown and verified deductions
  bool forced_final = false;
};

struct ShowRequest {
  PlayerId self = 0;
  Suggestion suggestion;
  CardSet matching;
  std::vector<ShowRecord> history;
  std::vector<std::string> names;
  const std::string& suggester_name() const {
    return names[static_cast<std::size_t>(suggestion.suggester)];
  }
};

// One seat at the table. Decisions carry every raw response so a game can be
// replayed from its log; the engine substitutes the fallback action when a
// decision reports fell_back.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual AgentDecision deduce(const PromptContext& ctx) = 0;
  virtual AgentDecision act(const PromptContext& ctx) = 0;
  virtual AgentDecision show_card(const ShowRequest& req) = 0;
};

}  // namespace clue
