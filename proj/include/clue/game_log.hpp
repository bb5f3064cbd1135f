#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clue/agents.hpp"
#include "clue/engine.hpp"
#include "clue/gateway.hpp"

namespace clue {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kRosterVersion = 1;

class CorruptLog : public Error {
 public:
  CorruptLog(std::size_t offset, const std::string& detail)
      : Error("corrupt log at byte " + std::to_string(offset) + ": " + detail), offset(offset) {}
  std::size_t offset;
};

class SchemaMismatch : public Error {
 public:
  SchemaMismatch(int found, int expected)
      : Error("log schema version " + std::to_string(found) + " is not supported (this build reads version " +
              std::to_string(expected) + ")"),
        found(found),
        expected(expected) {}
  int found;
  int expected;
};

class ReplayDivergence : public Error {
 public:
  ReplayDivergence(int turn_index, const std::string& field)
      : Error("replay diverged at turn " + std::to_string(turn_index) + " in field '" + field + "'"),
        turn_index(turn_index),
        field(field) {}
  int turn_index;
  std::string field;
};

struct LogHeader {
  int schema_version = kSchemaVersion;
  int roster_version = kRosterVersion;
  std::string tournament_id;
  int game_index = 0;
  GameConfig config;
  std::vector<std::string> names;
  std::vector<std::string> labels;
  std::vector<int> hand_sizes;
  bool operator==(const LogHeader&) const = default;
};

// Header, one record per event, the result footer and finally the sealed
// ground truth (solution and hands), which blind analyses skip.
struct GameLog {
  LogHeader header;
  std::vector<GameEvent> events;
  std::optional<PlayerId> winner;
  int rounds_played = 0;
  std::vector<PlayerStanding> players;
  Solution solution;
  std::vector<Hand> hands;

  GameResult result() const;
  bool operator==(const GameLog&) const = default;
};

GameLog make_log(const GameConfig& config, const GameResult& result,
                 const std::string& tournament_id = "", int game_index = 0);

// JSON forms, shared with the tournament spec reader.
nlohmann::json config_to_json(const GameConfig& c);
GameConfig config_from_json(const nlohmann::json& j);
nlohmann::json agent_spec_to_json(const AgentSpec& a);
AgentSpec agent_spec_from_json(const nlohmann::json& j);
nlohmann::json event_to_json(const GameEvent& e);
GameEvent event_from_json(const nlohmann::json& j);
nlohmann::json decision_to_json(const AgentDecision& d);
AgentDecision decision_from_json(const nlohmann::json& j);

std::string to_jsonl(const GameLog& log);
// Throws CorruptLog or SchemaMismatch.
GameLog parse_log(const std::string& text);
void write_log(const std::filesystem::path& path, const GameLog& log);
GameLog read_log(const std::filesystem::path& path);

std::string gateway_to_jsonl(const GatewayLog& records);
GatewayLog parse_gateway_log(const std::string& text);

struct ReplayOptions {
  OracleOptions oracle;
};

// Re-runs the game from its header. Model-backed seats answer from their
// recorded attempts; Random and Oracle seats are re-seated from their seeds.
// Every regenerated event, the footer and the sealed deal must match.
GameResult replay(const GameLog& log, const ReplayOptions& options = {});

}  // namespace clue
