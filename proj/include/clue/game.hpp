#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "clue/cards.hpp"
#include "clue/config.hpp"
#include "clue/decision.hpp"

namespace clue {

using Solution = Triple;

struct Hand {
  PlayerId owner = 0;
  CardSet cards;
  bool operator==(const Hand&) const = default;
};

struct Suggestion {
  PlayerId suggester = 0;
  Triple cards;
  int round = 0;
  int turn_index = 0;
  bool operator==(const Suggestion&) const = default;
};

// The shown card is only ever visible to the suggester (and known to the
// disprover); player views strip it for everyone else.
struct DisproofOutcome {
  std::vector<PlayerId> passers;
  std::optional<PlayerId> disprover;
  std::optional<Card> shown_card;
  bool operator==(const DisproofOutcome&) const = default;
};

struct Accusation {
  PlayerId accuser = 0;
  Triple cards;
  int round = 0;
  bool forced = false;
  bool operator==(const Accusation&) const = default;
};

struct SuggestionMade {
  Suggestion suggestion;
  DisproofOutcome outcome;
  AgentDecision act;
  std::optional<AgentDecision> show;  // absent when no card or a single card had to be shown
  bool operator==(const SuggestionMade&) const = default;
};

struct AccusationMade {
  Accusation accusation;
  bool correct = false;
  int accuracy = 0;
  AgentDecision act;
  bool operator==(const AccusationMade&) const = default;
};

struct PlayerEliminated {
  PlayerId player = 0;
  bool operator==(const PlayerEliminated&) const = default;
};

// `filtered` holds claimed cards that were not deductions: the claimant's own
// hand, cards shown to it, and cards it had already correctly claimed.
struct DeductionRecorded {
  PlayerId player = 0;
  CardSet claimed;
  CardSet correct;
  CardSet incorrect;
  CardSet filtered;
  AgentDecision decision;
  bool operator==(const DeductionRecorded&) const = default;
};

struct FallbackTriggered {
  PlayerId player = 0;
  Phase phase = Phase::Deduce;
  bool operator==(const FallbackTriggered&) const = default;
};

struct GameEnded {
  std::optional<PlayerId> winner;
  bool operator==(const GameEnded&) const = default;
};

using EventPayload = std::variant<SuggestionMade, AccusationMade, PlayerEliminated,
                                  DeductionRecorded, FallbackTriggered, GameEnded>;

struct GameEvent {
  int seq = 0;
  int turn_index = 0;
  int round = 0;
  EventPayload payload;
  bool operator==(const GameEvent&) const = default;
};

struct ShowRecord {
  int turn_index = 0;
  PlayerId to = 0;
  Card card;
  bool operator==(const ShowRecord&) const = default;
};

struct GameState {
  GameConfig config;
  CardSet deck;
  Solution solution;
  std::vector<Hand> hands;
  std::vector<bool> eliminated;
  std::vector<GameEvent> events;
  int round = 0;
  int turn_index = 0;
  std::optional<PlayerId> winner;
  bool over = false;

  // Per-player memory carried between turns.
  std::vector<std::string> last_reasoning;
  std::vector<std::optional<Suggestion>> last_suggestion;
  std::vector<std::string> last_deduction;
  std::vector<CardSet> verified_deductions;
  std::vector<std::vector<ShowRecord>> show_history;

  int num_players() const { return config.num_players; }
  bool active(PlayerId p) const { return !eliminated[static_cast<std::size_t>(p)]; }
  int active_count() const;
  std::vector<int> hand_sizes() const;
  const CardSet& hand(PlayerId p) const { return hands[static_cast<std::size_t>(p)].cards; }
  // nullopt means the envelope.
  std::optional<PlayerId> holder_of(Card c) const;
  GameEvent& emit(EventPayload payload);
};

struct SetupResult {
  Solution solution;
  std::vector<Hand> hands;
  GameState state;
};

// Draws the envelope uniformly per category, shuffles the rest and deals it
// round-robin from starting_seat. Throws InvalidConfig.
SetupResult setup_game(const GameConfig& config);

// A fresh state for an explicit deal (tests and analyses). Throws
// InvalidConfig unless the solution and hands partition the deck.
GameState state_from_deal(const GameConfig& config, const Solution& solution,
                          const std::vector<Hand>& hands);

struct PlayerStanding {
  PlayerId player = 0;
  std::optional<Triple> accusation;
  int accuracy = 0;
  int accusation_round = 0;  // 0 when the player never accused
  bool correct = false;
  bool eliminated = false;
  int rank = 0;
  bool operator==(const PlayerStanding&) const = default;
};

struct GameResult {
  std::optional<PlayerId> winner;
  std::vector<PlayerStanding> players;
  std::vector<GameEvent> events;
  int rounds_played = 0;
  Solution solution;
  std::vector<Hand> hands;
};

int accuracy_count(const Triple& accusation, const Solution& solution);

}  // namespace clue
