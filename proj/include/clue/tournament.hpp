#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clue/game_log.hpp"
#include "clue/gateway.hpp"
#include "clue/metrics.hpp"

namespace clue {

struct GatewaySettings {
  int max_concurrent = 4;
  int timeout_ms = 60'000;
  int max_tokens = 2048;
  int retries = 3;  // backend calls per completion
  bool operator==(const GatewaySettings&) const = default;
};

struct TournamentSpec {
  std::string tournament_id = "tournament";
  int games = 1;
  bool rotation = true;
  std::optional<std::uint64_t> seed;
  GameConfig base;  // seed and starting seat are set per game
  GatewaySettings gateway;

  // Throws InvalidConfig.
  void validate() const;
  bool has_llm() const;
  // Config of game k: derived seed, rotated starting seat.
  GameConfig game_config(int k) const;

  static TournamentSpec parse(const std::string& json_text);
  static TournamentSpec load(const std::filesystem::path& path);
  std::string dump() const;
};

struct TournamentOptions {
  int parallel = 1;
  // Offline transcript; replaces every provider.
  std::optional<MockFixture> mock;
  // Used for every provider when set (tests); takes precedence over `mock`.
  std::shared_ptr<Backend> backend;
  const PromptTemplates* templates = nullptr;
  // Overrides the retry sleeper (tests).
  std::function<void(std::chrono::milliseconds)> sleeper;
  OracleOptions oracle;
};

struct GameRun {
  GameLog log;
  GatewayLog gateway;
};

struct TournamentRun {
  TournamentSpec spec;
  std::vector<GameRun> games;
  TournamentReport report;

  std::vector<GameLog> logs() const;
  // Transcript that re-executes every model call offline.
  MockFixture fixture() const;
};

TournamentRun run_tournament(const TournamentSpec& spec, const TournamentOptions& options = {});

// <out>/<tournament_id>/game_<k>.jsonl, gateway_<k>.jsonl, summary.csv,
// heatmap.csv, knowledge.csv, plus mock_fixture.json when models were called.
std::filesystem::path write_tournament(const TournamentRun& run, const std::filesystem::path& out_dir);

// game_*.jsonl files of a directory in game-index order.
std::vector<GameLog> read_logs(const std::filesystem::path& dir);

}  // namespace clue
