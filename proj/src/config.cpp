#include "clue/config.hpp"

#include <set>

namespace clue {
namespace {

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

std::string_view agent_kind_name(AgentKind k) {
  switch (k) {
    case AgentKind::Random: return "random";
    case AgentKind::Oracle: return "oracle";
    case AgentKind::Llm: return "llm";
  }
  return "?";
}

AgentKind parse_agent_kind(std::string_view s) {
  if (s == "random") return AgentKind::Random;
  if (s == "oracle") return AgentKind::Oracle;
  if (s == "llm") return AgentKind::Llm;
  throw InvalidConfig("unknown agent kind '" + std::string(s) + "'");
}

std::string AgentSpec::report_label() const {
  if (!label.empty()) return label;
  if (kind == AgentKind::Llm) return model_id;
  return std::string(agent_kind_name(kind));
}

void GameConfig::validate() const {
  const int cards_to_deal = deck.size() - 3;
  if (num_players < 2 || num_players > cards_to_deal) {
    throw InvalidConfig("num_players must be between 2 and " + std::to_string(cards_to_deal) +
                        ", got " + std::to_string(num_players));
  }
  if (round_limit < 1) throw InvalidConfig("round_limit must be at least 1");
  if (starting_seat < 0 || starting_seat >= num_players) {
    throw InvalidConfig("starting_seat must be in [0, num_players)");
  }
  if (!agents.empty() && static_cast<int>(agents.size()) != num_players) {
    throw InvalidConfig("agent list has " + std::to_string(agents.size()) + " entries for " +
                        std::to_string(num_players) + " players");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const AgentSpec& a = agents[i];
    if (a.kind == AgentKind::Llm && a.model_id.empty()) {
      throw InvalidConfig("llm agent at seat " + std::to_string(i) + " needs a model_id");
    }
    if (!(a.temperature >= 0.0 && a.temperature <= 1.0)) {
      throw InvalidConfig("agent temperature must be in [0, 1]");
    }
    const std::string name = player_name(static_cast<PlayerId>(i));
    // Names appear inside prompt history lines, which use these as delimiters.
    if (name.empty() || name.find_first_of(",()[]\n") != std::string::npos || name != trimmed(name)) {
      throw InvalidConfig("player name '" + name + "' must be non-empty, trimmed and free of , ( ) [ ]");
    }
    if (!names.insert(name).second) {
      throw InvalidConfig("duplicate player name '" + name + "'");
    }
  }
}

std::string GameConfig::player_name(PlayerId p) const {
  const auto idx = static_cast<std::size_t>(p);
  if (idx < agents.size() && !agents[idx].display_name.empty()) return agents[idx].display_name;
  return "P" + std::to_string(p + 1);
}

}  // namespace clue
