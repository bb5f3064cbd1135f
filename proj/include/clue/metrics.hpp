#pragma once

#include <string>
#include <utility>
#include <vector>

#include "clue/game_log.hpp"

namespace clue {

class MixedConfig : public Error {
 public:
  using Error::Error;
};

struct PlayerGameMetrics {
  PlayerId player = 0;
  std::string label;
  int rank = 0;
  int accuracy = 0;  // correct solution cards in the accusation, 0 without one
  double accuracy_norm = 0;
  int ded_correct = 0;
  int ded_incorrect = 0;
  int fallbacks = 0;
  std::vector<int> known;  // index r = cards known after round r; index 0 is the deal
};

// Hand size plus the distinct cards shown to p or correctly claimed by p up
// to the end of each round. Length rounds_played + 1.
std::vector<int> knowledge_series(const GameLog& log, PlayerId p);
std::pair<int, int> deduction_tallies(const GameLog& log, PlayerId p);
std::pair<int, double> accusation_accuracy(const GameLog& log, PlayerId p);
int fallback_count(const GameLog& log, PlayerId p);
std::vector<PlayerGameMetrics> game_metrics(const GameLog& log);

struct LabelSummary {
  std::string label;
  int appearances = 0;  // player-games
  int wins = 0;
  double mean_rank = 0;
  double mean_acc_norm = 0;
  double ded_correct_mean = 0;
  double ded_incorrect_mean = 0;
  double fallbacks_mean = 0;
  std::vector<double> known_curve;  // mean cards known after each round
};

struct HeatmapRow {
  PlayerId seat = 0;
  std::string name;
  std::string label;
  std::vector<int> accuracy;  // one entry per game
};

struct TournamentReport {
  int games = 0;
  int num_players = 0;
  std::vector<LabelSummary> labels;  // order of first appearance
  std::vector<HeatmapRow> heatmap;

  std::string summary_csv() const;
  std::string heatmap_csv() const;
  std::string knowledge_csv() const;
  std::string table() const;
};

// Throws MixedConfig when the logs disagree on the player count.
TournamentReport build_report(const std::vector<GameLog>& logs);

}  // namespace clue
