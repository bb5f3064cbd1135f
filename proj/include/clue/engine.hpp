#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "clue/agent.hpp"
#include "clue/game.hpp"
#include "clue/view.hpp"

namespace clue {

using ShowChooser = std::function<Card(PlayerId disprover, CardSet matching)>;

// Queries players clockwise from the seat after the suggester. The first one
// holding any suggested card disproves; `choose` picks the card it shows.
DisproofOutcome resolve_suggestion(const GameState& state, const Suggestion& s,
                                   const ShowChooser& choose);

struct AccusationOutcome {
  bool correct = false;
  int accuracy = 0;
};

// Marks the accuser as winner or eliminated. Eliminated players still
// disprove suggestions.
AccusationOutcome apply_accusation(GameState& state, const Accusation& a);

// Solvers first (in the order they solved), then by accuracy descending, then
// accusation round ascending, then seat. Players who never accused sort
// after every accuser with the same accuracy.
std::vector<std::pair<PlayerId, int>> rank_players(const GameResult& result);

PlayerView player_view(const GameState& state, PlayerId p);

PromptContext make_context(const GameState& state, PlayerId p, bool forced_final);

// Deterministic card choice used by the oracle and as the show-card fallback:
// a card already shown to this suggester, else the most-shown card, else the
// lowest category.
Card heuristic_show_choice(CardSet matching, PlayerId suggester,
                           const std::vector<ShowRecord>& history);

struct EngineHooks {
  // Called after every emitted event; used by tests and the log writer.
  std::function<void(const GameState&, const GameEvent&)> on_event;
};

// Runs the game loop until a correct accusation, elimination of every player,
// or the round limit; at the limit every remaining player makes one forced
// accusation in seat order.
GameResult run_game(const GameConfig& config, std::span<Agent* const> agents,
                    const EngineHooks& hooks = {});

GameResult run_game(const GameConfig& config, const std::vector<std::unique_ptr<Agent>>& agents,
                    const EngineHooks& hooks = {});

}  // namespace clue
