#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clue/cards.hpp"

namespace clue {

using PlayerId = int;

enum class AgentKind { Random, Oracle, Llm };

std::string_view agent_kind_name(AgentKind k);
AgentKind parse_agent_kind(std::string_view s);

struct AgentSpec {
  AgentKind kind = AgentKind::Random;
  std::string model_id;      // Llm only
  std::string provider;      // Llm only: "openai", "gemini" or "mock"
  double temperature = 0.7;  // Llm only
  std::string display_name;
  std::string label;  // report grouping; defaults from the kind or model id

  std::string report_label() const;
  bool operator==(const AgentSpec&) const = default;
};

// Cards in play per category. The standard game uses the full 6/6/9 roster.
struct DeckShape {
  int suspects = 6;
  int weapons = 6;
  int rooms = 9;

  CardSet cards() const { return reduced_deck(suspects, weapons, rooms); }
  int size() const { return suspects + weapons + rooms; }
  bool operator==(const DeckShape&) const = default;
};

struct GameConfig {
  std::uint64_t seed = 0;
  int num_players = 6;
  int round_limit = 30;
  std::vector<AgentSpec> agents;
  int starting_seat = 0;
  DeckShape deck;

  // Throws InvalidConfig.
  void validate() const;
  std::string player_name(PlayerId p) const;
  bool operator==(const GameConfig&) const = default;
};

}  // namespace clue
