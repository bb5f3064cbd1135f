#include "clue/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace clue {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void check_player(const GameLog& log, PlayerId p) {
  if (p < 0 || p >= log.header.config.num_players ||
      static_cast<std::size_t>(p) >= log.header.hand_sizes.size()) {
    throw CorruptLog(0, "player " + std::to_string(p) + " is not in this game");
  }
}

}  // namespace

std::vector<int> knowledge_series(const GameLog& log, PlayerId p) {
  check_player(log, p);
  const int cap = log.header.config.deck.size() - 3;
  const int hand = log.header.hand_sizes[static_cast<std::size_t>(p)];
  std::vector<CardSet> learned(static_cast<std::size_t>(log.rounds_played) + 1);
  for (const GameEvent& e : log.events) {
    if (e.round < 1 || e.round > log.rounds_played) continue;
    auto& slot = learned[static_cast<std::size_t>(e.round)];
    if (const auto* s = std::get_if<SuggestionMade>(&e.payload)) {
      if (s->suggestion.suggester == p && s->outcome.shown_card) slot.insert(*s->outcome.shown_card);
    } else if (const auto* d = std::get_if<DeductionRecorded>(&e.payload)) {
      if (d->player == p) slot |= d->correct;
    }
  }
  std::vector<int> out;
  CardSet known;
  for (const CardSet& round : learned) {
    known |= round;
    out.push_back(std::min(cap, hand + known.size()));
  }
  return out;
}

std::pair<int, int> deduction_tallies(const GameLog& log, PlayerId p) {
  check_player(log, p);
  int correct = 0;
  int incorrect = 0;
  for (const GameEvent& e : log.events) {
    if (const auto* d = std::get_if<DeductionRecorded>(&e.payload)) {
      if (d->player != p) continue;
      correct += d->correct.size();
      incorrect += d->incorrect.size();
    }
  }
  return {correct, incorrect};
}

std::pair<int, double> accusation_accuracy(const GameLog& log, PlayerId p) {
  check_player(log, p);
  for (const GameEvent& e : log.events) {
    if (const auto* a = std::get_if<AccusationMade>(&e.payload)) {
      if (a->accusation.accuser == p) return {a->accuracy, a->accuracy / 3.0};
    }
  }
  return {0, 0.0};
}

int fallback_count(const GameLog& log, PlayerId p) {
  check_player(log, p);
  int n = 0;
  for (const GameEvent& e : log.events) {
    if (const auto* f = std::get_if<FallbackTriggered>(&e.payload)) n += f->player == p ? 1 : 0;
  }
  return n;
}

std::vector<PlayerGameMetrics> game_metrics(const GameLog& log) {
  std::vector<PlayerGameMetrics> out;
  for (PlayerId p = 0; p < log.header.config.num_players; ++p) {
    PlayerGameMetrics m;
    m.player = p;
    m.label = log.header.labels.at(static_cast<std::size_t>(p));
    for (const PlayerStanding& s : log.players) {
      if (s.player == p) m.rank = s.rank;
    }
    std::tie(m.accuracy, m.accuracy_norm) = accusation_accuracy(log, p);
    std::tie(m.ded_correct, m.ded_incorrect) = deduction_tallies(log, p);
    m.fallbacks = fallback_count(log, p);
    m.known = knowledge_series(log, p);
    out.push_back(std::move(m));
  }
  return out;
}

TournamentReport build_report(const std::vector<GameLog>& logs) {
  if (logs.empty()) throw Error("a report needs at least one game log");
  TournamentReport r;
  r.games = static_cast<int>(logs.size());
  r.num_players = logs.front().header.config.num_players;
  std::size_t max_len = 0;
  for (const GameLog& log : logs) {
    if (log.header.config.num_players != r.num_players) {
      throw MixedConfig("logs disagree on the player count (" + std::to_string(r.num_players) + " vs " +
                        std::to_string(log.header.config.num_players) + ")");
    }
    max_len = std::max(max_len, static_cast<std::size_t>(log.rounds_played) + 1);
  }

  struct Acc {
    LabelSummary s;
    std::vector<double> known_sum;
    long rank_sum = 0, acc_count = 0, ded_c = 0, ded_i = 0, fb = 0;
  };
  std::vector<Acc> acc;
  std::map<std::string, std::size_t> index;
  for (PlayerId p = 0; p < r.num_players; ++p) {
    const auto idx = static_cast<std::size_t>(p);
    r.heatmap.push_back(HeatmapRow{p, logs.front().header.names.at(idx), logs.front().header.labels.at(idx), {}});
  }

  for (const GameLog& log : logs) {
    for (const PlayerGameMetrics& m : game_metrics(log)) {
      auto [it, fresh] = index.try_emplace(m.label, acc.size());
      if (fresh) {
        acc.emplace_back();
        acc.back().s.label = m.label;
        acc.back().known_sum.assign(max_len, 0.0);
      }
      Acc& a = acc[it->second];
      ++a.s.appearances;
      if (log.winner && *log.winner == m.player) ++a.s.wins;
      a.rank_sum += m.rank;
      a.acc_count += m.accuracy;
      a.ded_c += m.ded_correct;
      a.ded_i += m.ded_incorrect;
      a.fb += m.fallbacks;
      // Curves hold their final value once a game is over.
      for (std::size_t k = 0; k < max_len; ++k) {
        a.known_sum[k] += m.known[std::min(k, m.known.size() - 1)];
      }
      r.heatmap[static_cast<std::size_t>(m.player)].accuracy.push_back(m.accuracy);
    }
  }
  for (Acc& a : acc) {
    const double n = a.s.appearances;
    a.s.mean_rank = static_cast<double>(a.rank_sum) / n;
    a.s.mean_acc_norm = static_cast<double>(a.acc_count) / (3.0 * n);
    a.s.ded_correct_mean = static_cast<double>(a.ded_c) / n;
    a.s.ded_incorrect_mean = static_cast<double>(a.ded_i) / n;
    a.s.fallbacks_mean = static_cast<double>(a.fb) / n;
    for (double v : a.known_sum) a.s.known_curve.push_back(v / n);
    r.labels.push_back(std::move(a.s));
  }
  return r;
}

std::string TournamentReport::summary_csv() const {
  std::string out = "label,wins,mean_rank,mean_acc_norm,ded_correct_mean,ded_incorrect_mean,fallbacks_mean\n";
  for (const LabelSummary& s : labels) {
    out += s.label + "," + std::to_string(s.wins) + "," + fixed6(s.mean_rank) + "," + fixed6(s.mean_acc_norm) +
           "," + fixed6(s.ded_correct_mean) + "," + fixed6(s.ded_incorrect_mean) + "," + fixed6(s.fallbacks_mean) +
           "\n";
  }
  return out;
}

std::string TournamentReport::heatmap_csv() const {
  std::string out = "seat,name,label";
  for (int g = 0; g < games; ++g) out += ",game_" + std::to_string(g);
  out += "\n";
  for (const HeatmapRow& row : heatmap) {
    out += std::to_string(row.seat) + "," + row.name + "," + row.label;
    for (int v : row.accuracy) out += "," + std::to_string(v);
    out += "\n";
  }
  return out;
}

std::string TournamentReport::knowledge_csv() const {
  std::string out = "round";
  for (const LabelSummary& s : labels) out += "," + s.label;
  out += "\n";
  const std::size_t len = labels.empty() ? 0 : labels.front().known_curve.size();
  for (std::size_t k = 0; k < len; ++k) {
    out += std::to_string(k);
    for (const LabelSummary& s : labels) out += "," + fixed6(s.known_curve[k]);
    out += "\n";
  }
  return out;
}

std::string TournamentReport::table() const {
  const std::vector<std::string> head = {"label", "wins", "mean_rank", "mean_acc_norm", "ded_correct_mean",
                                         "ded_incorrect_mean", "fallbacks_mean"};
  std::vector<std::vector<std::string>> rows = {head};
  for (const LabelSummary& s : labels) {
    rows.push_back({s.label, std::to_string(s.wins), fixed6(s.mean_rank), fixed6(s.mean_acc_norm),
                    fixed6(s.ded_correct_mean), fixed6(s.ded_incorrect_mean), fixed6(s.fallbacks_mean)});
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      const std::string& cell = rows[r][i];
      const std::string pad(width[i] - cell.size(), ' ');
      // Label left-aligned, numbers right-aligned.
      out += i == 0 ? cell + pad : "  " + pad + cell;
    }
    out += "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w + 2;
      out += std::string(total - 2, '-') + "\n";
    }
  }
  out += std::to_string(games) + " game(s), " + std::to_string(num_players) + " players\n";
  return out;
}

}  // namespace clue
