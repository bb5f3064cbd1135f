#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "clue/agents.hpp"
#include "clue/deduction.hpp"
#include "clue/engine.hpp"
#include "clue/gateway.hpp"
#include "clue/response_parser.hpp"

namespace testing {

using namespace clue;

inline Card C(const char* name) { return card_named(name); }

inline CardSet cards(std::initializer_list<const char*> names) {
  CardSet out;
  for (const char* n : names) out.insert(card_named(n));
  return out;
}

inline Triple T(const char* s, const char* w, const char* r) { return Triple{C(s), C(w), C(r)}; }

inline GameConfig config_of(int players, std::uint64_t seed = 1, AgentKind kind = AgentKind::Random) {
  GameConfig c;
  c.seed = seed;
  c.num_players = players;
  for (int i = 0; i < players; ++i) c.agents.push_back(AgentSpec{kind, "", "", 0.7, "", ""});
  return c;
}

inline std::vector<std::unique_ptr<Agent>> seat_agents(const GameConfig& cfg) {
  std::vector<std::unique_ptr<Agent>> out;
  AgentFactoryContext ctx;
  ctx.game_seed = cfg.seed;
  for (PlayerId p = 0; p < cfg.num_players; ++p) out.push_back(make_agent(cfg.agents[static_cast<std::size_t>(p)], p, ctx));
  return out;
}

// Agent driven by lambdas; unset phases fall back to a fixed legal answer.
struct ScriptedAgent : Agent {
  std::function<Parsed(const PromptContext&)> on_deduce;
  std::function<Parsed(const PromptContext&)> on_act;
  std::function<Card(const ShowRequest&)> on_show;
  int show_calls = 0;

  AgentDecision deduce(const PromptContext& ctx) override {
    return canonical_decision(Phase::Deduce, on_deduce ? on_deduce(ctx) : Parsed(DeductionClaim{"none", {}}));
  }
  AgentDecision act(const PromptContext& ctx) override {
    if (on_act) return canonical_decision(Phase::Act, on_act(ctx));
    const CardSet d = ctx.view.deck;
    Move m{"s", "r", Triple{d.of(Category::Suspect).first(), d.of(Category::Weapon).first(),
                            d.of(Category::Room).first()}, std::nullopt};
    if (ctx.forced_final) m.accusation = m.suggestion;
    return canonical_decision(Phase::Act, m);
  }
  AgentDecision show_card(const ShowRequest& req) override {
    ++show_calls;
    return canonical_decision(Phase::ShowCard, Show{"r", on_show ? on_show(req) : req.matching.first()});
  }
};

// Independent possible-worlds oracle over the raw content of a view: every
// deal of the deck consistent with the owner's hand, the cards shown to it,
// the passes and disproofs in the history and the verified claims.
struct BruteWorld {
  Triple envelope;
  std::vector<CardSet> hands;
};

inline bool world_consistent(const PlayerView& v, const BruteWorld& w) {
  if (w.hands[static_cast<std::size_t>(v.self)] != v.hand) return false;
  for (const ShownToMe& s : v.shown_to_me) {
    if (!w.hands[static_cast<std::size_t>(s.from)].contains(s.card)) return false;
  }
  for (Card c : v.verified_deductions) {
    if (w.envelope.cards().contains(c)) return false;
  }
  for (const HistoryEntry& e : v.history) {
    const CardSet t = e.cards.cards();
    for (PlayerId q : e.passers) {
      if (!(w.hands[static_cast<std::size_t>(q)] & t).empty()) return false;
    }
    if (e.disprover) {
      const CardSet& h = w.hands[static_cast<std::size_t>(*e.disprover)];
      if ((h & t).empty()) return false;
      if (e.shown && !h.contains(*e.shown)) return false;
    }
  }
  return true;
}

// Enumerates every (envelope, hands) deal with the view's hand sizes.
inline void for_each_deal(const PlayerView& v, const std::function<void(const BruteWorld&)>& visit) {
  const CardSet deck = v.deck;
  for (Card s : deck.of(Category::Suspect))
    for (Card w : deck.of(Category::Weapon))
      for (Card r : deck.of(Category::Room)) {
        const Triple env{s, w, r};
        const std::vector<Card> rest = (deck - env.cards()).to_vector();
        std::vector<CardSet> hands(static_cast<std::size_t>(v.num_players));
        std::function<void(std::size_t)> assign = [&](std::size_t i) {
          if (i == rest.size()) {
            visit(BruteWorld{env, hands});
            return;
          }
          for (std::size_t p = 0; p < hands.size(); ++p) {
            if (hands[p].size() >= v.hand_sizes[p]) continue;
            hands[p].insert(rest[i]);
            assign(i + 1);
            hands[p].erase(rest[i]);
          }
        };
        assign(0);
      }
}

// (card, holder) pairs true in every consistent deal; holder -1 = envelope.
inline std::set<std::pair<int, int>> brute_certain(const PlayerView& v, std::uint64_t* worlds = nullptr) {
  std::map<int, std::set<int>> where;
  std::uint64_t n = 0;
  for_each_deal(v, [&](const BruteWorld& w) {
    if (!world_consistent(v, w)) return;
    ++n;
    for (Card c : w.envelope.cards()) where[c.id()].insert(-1);
    for (std::size_t p = 0; p < w.hands.size(); ++p) {
      for (Card c : w.hands[p]) where[c.id()].insert(static_cast<int>(p));
    }
  });
  if (worlds) *worlds = n;
  std::set<std::pair<int, int>> out;
  if (n == 0) return out;
  for (const auto& [card, locs] : where) {
    if (locs.size() == 1) out.insert({card, *locs.begin()});
  }
  return out;
}

inline std::set<std::pair<int, int>> fact_set(const std::vector<Fact>& facts) {
  std::set<std::pair<int, int>> out;
  for (const Fact& f : facts) out.insert({f.card.id(), f.location.holder});
  return out;
}

inline bool fact_true(const Fact& f, const Solution& sol, const std::vector<Hand>& hands) {
  if (f.location.is_envelope()) return sol.cards().contains(f.card);
  return hands[static_cast<std::size_t>(f.location.holder)].cards.contains(f.card);
}

// Rule-engine invariants checked against the sealed deal; returns the list
// of violations (empty when the game is sound).
inline std::vector<std::string> rule_violations(const GameConfig& cfg, const GameResult& r) {
  std::vector<std::string> bad;
  auto fail = [&](const std::string& what, int turn) { bad.push_back("turn " + std::to_string(turn) + ": " + what); };
  const int n = cfg.num_players;
  const SetupResult fresh = setup_game(cfg);
  if (fresh.solution != r.solution || fresh.hands != r.hands) fail("deal differs from the seeded setup", 0);
  CardSet seen = r.solution.cards();
  int total = 3;
  for (const Hand& h : r.hands) {
    if (!(seen & h.cards).empty()) fail("card in two locations", 0);
    seen |= h.cards;
    total += h.cards.size();
  }
  if (seen != cfg.deck.cards() || total != cfg.deck.size()) fail("deal does not partition the deck", 0);

  std::vector<bool> out(static_cast<std::size_t>(n), false);
  int ends = 0;
  int last_seq = -1;
  bool finals = false;
  auto check_decision = [&](const AgentDecision& d, int turn) {
    if (d.attempts.empty() || d.attempts.size() > 3) fail("attempt count out of range", turn);
    if (d.fell_back && d.attempts.size() != 3) fail("fallback before three attempts", turn);
  };
  for (const GameEvent& e : r.events) {
    if (e.seq <= last_seq) fail("sequence numbers not increasing", e.turn_index);
    last_seq = e.seq;
    if (ends) fail("event after GameEnded", e.turn_index);
    if (e.round < 1 || e.round > cfg.round_limit) fail("round out of range", e.turn_index);
    if (const auto* s = std::get_if<SuggestionMade>(&e.payload)) {
      const PlayerId who = s->suggestion.suggester;
      if (out[static_cast<std::size_t>(who)]) fail("eliminated player suggested", e.turn_index);
      if (finals) fail("suggestion during forced finals", e.turn_index);
      if (!s->suggestion.cards.valid()) fail("invalid suggestion", e.turn_index);
      check_decision(s->act, e.turn_index);
      if (s->show) check_decision(*s->show, e.turn_index);
      const CardSet t = s->suggestion.cards.cards();
      std::size_t i = 0;
      bool found = false;
      for (int k = 1; k < n; ++k) {
        const PlayerId q = (who + k) % n;
        const CardSet match = r.hands[static_cast<std::size_t>(q)].cards & t;
        if (match.empty()) {
          if (i >= s->outcome.passers.size() || s->outcome.passers[i] != q) fail("passer list wrong", e.turn_index);
          ++i;
          continue;
        }
        found = true;
        if (s->outcome.disprover != q) fail("disprover is not the first holder clockwise", e.turn_index);
        if (!s->outcome.shown_card || !match.contains(*s->outcome.shown_card)) fail("shown card not a match", e.turn_index);
        if ((match.size() > 1) != s->show.has_value()) fail("show phase without a choice", e.turn_index);
        break;
      }
      if (i != s->outcome.passers.size()) fail("extra passers", e.turn_index);
      for (PlayerId q : s->outcome.passers) {
        if (!(r.hands[static_cast<std::size_t>(q)].cards & t).empty()) fail("dishonest pass", e.turn_index);
      }
      if (!found && (s->outcome.disprover || s->outcome.shown_card)) fail("disproof without a match", e.turn_index);
    } else if (const auto* a = std::get_if<AccusationMade>(&e.payload)) {
      const PlayerId who = a->accusation.accuser;
      if (out[static_cast<std::size_t>(who)]) fail("eliminated player accused", e.turn_index);
      check_decision(a->act, e.turn_index);
      if (a->accusation.forced) {
        finals = true;
        if (r.rounds_played != cfg.round_limit || a->accusation.round != cfg.round_limit) fail("forced accusation early", e.turn_index);
      } else if (finals) {
        fail("free accusation during forced finals", e.turn_index);
      }
      if (a->correct != (a->accusation.cards == r.solution)) fail("accusation misjudged", e.turn_index);
      if (a->accuracy != accuracy_count(a->accusation.cards, r.solution)) fail("accuracy miscounted", e.turn_index);
    } else if (const auto* el = std::get_if<PlayerEliminated>(&e.payload)) {
      if (out[static_cast<std::size_t>(el->player)]) fail("eliminated twice", e.turn_index);
      out[static_cast<std::size_t>(el->player)] = true;
    } else if (const auto* d = std::get_if<DeductionRecorded>(&e.payload)) {
      if (out[static_cast<std::size_t>(d->player)]) fail("eliminated player deduced", e.turn_index);
      check_decision(d->decision, e.turn_index);
      if ((d->correct | d->incorrect | d->filtered) != d->claimed) fail("claim tallies do not cover the claim", e.turn_index);
    } else if (std::holds_alternative<GameEnded>(e.payload)) {
      ++ends;
      if (std::get<GameEnded>(e.payload).winner != r.winner) fail("GameEnded winner mismatch", e.turn_index);
    }
  }
  if (ends != 1) fail("expected exactly one GameEnded", 0);
  if (r.rounds_played > cfg.round_limit) fail("too many rounds", 0);
  if (!r.winner) {
    for (int p = 0; p < n; ++p) {
      if (!out[static_cast<std::size_t>(p)]) fail("game ended with an active player and no winner", 0);
    }
  }
  // Ranks are a permutation of 1..n.
  std::vector<int> ranks;
  for (const PlayerStanding& s : r.players) ranks.push_back(s.rank);
  std::sort(ranks.begin(), ranks.end());
  for (int i = 0; i < n; ++i) {
    if (ranks[static_cast<std::size_t>(i)] != i + 1) fail("ranks are not a permutation", 0);
  }
  return bad;
}

// Plays one suggestion on a hand-built state, as the engine would.
inline SuggestionMade play_suggestion(GameState& st, PlayerId who, const Triple& t,
                                      ShowChooser choose = [](PlayerId, CardSet m) { return m.first(); }) {
  if (st.round == 0) st.round = 1;
  ++st.turn_index;
  Suggestion s{who, t, st.round, st.turn_index};
  const DisproofOutcome out = resolve_suggestion(st, s, choose);
  SuggestionMade made{s, out, canonical_decision(Phase::Act, Move{"s", "r", t, std::nullopt}), std::nullopt};
  if (out.disprover) st.show_history[static_cast<std::size_t>(*out.disprover)].push_back({st.turn_index, who, *out.shown_card});
  st.emit(made);
  st.last_suggestion[static_cast<std::size_t>(who)] = s;
  return made;
}

// A view taken from a real game on the small 3/3/3 deck with three players,
// plus the deal it came from.
struct SampledView {
  PlayerView view;
  Solution solution;
  std::vector<Hand> hands;
};

inline GameConfig small_config(std::uint64_t seed) {
  GameConfig cfg = config_of(3, seed);
  cfg.deck = DeckShape{3, 3, 3};
  cfg.agents[seed % 3].kind = AgentKind::Oracle;
  cfg.starting_seat = static_cast<int>((seed / 3) % 3);
  return cfg;
}

inline SampledView sample_small_view(std::uint64_t seed) {
  const GameConfig cfg = small_config(seed);
  std::vector<SampledView> all;
  EngineHooks hooks;
  hooks.on_event = [&](const GameState& st, const GameEvent&) {
    for (PlayerId p = 0; p < 3; ++p) all.push_back({player_view(st, p), st.solution, st.hands});
  };
  run_game(cfg, seat_agents(cfg), hooks);
  Rng rng(seed, "sample");
  return all[static_cast<std::size_t>(rng.below(all.size()))];
}

// Stand-in for a model: well-formed, legal answers picked by hashing the
// prompt, so a rerun with the same prompts gives the same answers.
inline std::string canned_reply(const CompletionRequest& r) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : r.model_id + r.user_text) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
  const std::string& t = r.user_text;
  if (t.rfind("DEDUCTION PHASE", 0) == 0) return "ANALYSIS: nothing certain yet\nDEDUCED_CARDS: NONE";
  if (t.rfind("Another player (", 0) == 0) {
    const std::string key = "can disprove this suggestion: ";
    const auto at = t.find(key) + key.size();
    const auto end = t.find('\n', at);
    std::vector<std::string> options;
    std::string list = t.substr(at, end - at);
    for (std::size_t pos = 0; pos <= list.size();) {
      const auto comma = std::min(list.find(", ", pos), list.size());
      options.push_back(list.substr(pos, comma - pos));
      pos = comma + 2;
    }
    return "REASONING: any will do\nSHOW: " + options[h % options.size()];
  }
  const Card s = Card(static_cast<std::uint8_t>(h % 6));
  const Card w = Card(static_cast<std::uint8_t>(6 + (h / 6) % 6));
  const Card room = Card(static_cast<std::uint8_t>(12 + (h / 36) % 9));
  const std::string triple = std::string(s.name()) + ", " + std::string(w.name()) + ", " + std::string(room.name());
  const bool final_turn = t.find("FINAL ACCUSATION") != std::string::npos;
  return "SUMMARY: probing\nREASONING: trying an untested combination\nSUGGESTION: " + triple +
         "\nACCUSATION: " + (final_turn ? triple : std::string("NONE"));
}

}  // namespace testing
