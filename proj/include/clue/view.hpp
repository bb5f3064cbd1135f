#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clue/game.hpp"

namespace clue {

struct ShownToMe {
  int turn_index = 0;
  int round = 0;
  PlayerId from = 0;
  Card card;
  bool operator==(const ShownToMe&) const = default;
};

// A suggestion as one observer sees it. `shown` is filled only when the
// observer was the suggester or the disprover.
struct HistoryEntry {
  int turn_index = 0;
  int round = 0;
  PlayerId suggester = 0;
  Triple cards;
  std::vector<PlayerId> passers;
  std::optional<PlayerId> disprover;
  std::optional<Card> shown;
  bool operator==(const HistoryEntry&) const = default;
};

HistoryEntry visible_entry(const GameEvent& event, const SuggestionMade& s, PlayerId viewer);

// Everything one player may legitimately know: own hand, cards shown to it,
// the public suggestion history and its own memory. Never the envelope or
// other hands.
struct PlayerView {
  PlayerId self = 0;
  int num_players = 0;
  int round = 0;
  std::vector<std::string> names;
  std::vector<bool> active;
  std::vector<int> hand_sizes;
  CardSet deck;
  CardSet hand;
  std::vector<ShownToMe> shown_to_me;
  std::vector<ShowRecord> my_shows;
  std::vector<HistoryEntry> history;
  CardSet verified_deductions;
  std::string last_reasoning;
  std::optional<Suggestion> last_suggestion;
  std::string last_deduction;

  CardSet shown_cards() const;
  // Hand, shown and verified-deduced cards.
  CardSet seen() const { return hand | shown_cards() | verified_deductions; }
  const std::string& name(PlayerId p) const { return names[static_cast<std::size_t>(p)]; }
};

}  // namespace clue
