#include "clue/engine.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <tuple>

#include "clue/rng.hpp"

namespace clue {

// ---------------------------------------------------------------------------
// State and setup

int GameState::active_count() const {
  return static_cast<int>(std::count(eliminated.begin(), eliminated.end(), false));
}

std::vector<int> GameState::hand_sizes() const {
  std::vector<int> out;
  for (const Hand& h : hands) out.push_back(h.cards.size());
  return out;
}

std::optional<PlayerId> GameState::holder_of(Card c) const {
  for (const Hand& h : hands) {
    if (h.cards.contains(c)) return h.owner;
  }
  return std::nullopt;
}

GameEvent& GameState::emit(EventPayload payload) {
  events.push_back(GameEvent{static_cast<int>(events.size()), turn_index, round, std::move(payload)});
  return events.back();
}

int accuracy_count(const Triple& accusation, const Solution& solution) {
  return (accusation.suspect == solution.suspect ? 1 : 0) +
         (accusation.weapon == solution.weapon ? 1 : 0) + (accusation.room == solution.room ? 1 : 0);
}

SetupResult setup_game(const GameConfig& config) {
  config.validate();
  const CardSet deck = config.deck.cards();
  Rng rng(config.seed, "deal");

  Solution solution;
  for (Category cat : kCategories) {
    const auto cards = deck.of(cat).to_vector();
    const Card pick = rng.pick(cards);
    switch (cat) {
      case Category::Suspect: solution.suspect = pick; break;
      case Category::Weapon: solution.weapon = pick; break;
      case Category::Room: solution.room = pick; break;
    }
  }

  auto rest = (deck - solution.cards()).to_vector();
  rng.shuffle(rest);
  const auto n = static_cast<std::size_t>(config.num_players);
  std::vector<Hand> hands(n);
  for (std::size_t p = 0; p < n; ++p) hands[p].owner = static_cast<PlayerId>(p);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const auto seat = (static_cast<std::size_t>(config.starting_seat) + i) % n;
    hands[seat].cards.insert(rest[i]);
  }

  return SetupResult{solution, hands, state_from_deal(config, solution, hands)};
}

GameState state_from_deal(const GameConfig& config, const Solution& solution,
                          const std::vector<Hand>& hands) {
  config.validate();
  const CardSet deck = config.deck.cards();
  const auto n = static_cast<std::size_t>(config.num_players);
  if (hands.size() != n) throw InvalidConfig("need one hand per player");
  CardSet seen = solution.cards();
  if (!solution.valid() || !seen.is_subset_of(deck)) throw InvalidConfig("solution is not a deck triple");
  for (std::size_t p = 0; p < n; ++p) {
    if (hands[p].owner != static_cast<PlayerId>(p)) throw InvalidConfig("hands must be in seat order");
    if (!(hands[p].cards & seen).empty()) throw InvalidConfig("a card is dealt twice");
    seen |= hands[p].cards;
  }
  if (seen != deck) throw InvalidConfig("the deal does not cover the deck");

  GameState state;
  state.config = config;
  state.deck = deck;
  state.solution = solution;
  state.hands = hands;
  state.eliminated.assign(n, false);
  state.last_reasoning.assign(n, "");
  state.last_suggestion.assign(n, std::nullopt);
  state.last_deduction.assign(n, "");
  state.verified_deductions.assign(n, CardSet{});
  state.show_history.assign(n, {});
  return state;
}

// ---------------------------------------------------------------------------
// Rules

DisproofOutcome resolve_suggestion(const GameState& state, const Suggestion& s,
                                   const ShowChooser& choose) {
  DisproofOutcome out;
  const int n = state.num_players();
  const CardSet triple = s.cards.cards();
  for (int k = 1; k < n; ++k) {
    const PlayerId q = (s.suggester + k) % n;
    const CardSet matching = state.hand(q) & triple;
    if (matching.empty()) {
      out.passers.push_back(q);
      continue;
    }
    const Card shown = choose(q, matching);
    if (!matching.contains(shown)) throw Error("show-card choice is not a matching card");
    out.disprover = q;
    out.shown_card = shown;
    break;
  }
  return out;
}

AccusationOutcome apply_accusation(GameState& state, const Accusation& a) {
  AccusationOutcome out;
  out.accuracy = accuracy_count(a.cards, state.solution);
  out.correct = out.accuracy == 3;
  if (out.correct) {
    if (!state.winner) state.winner = a.accuser;
    state.over = true;
  } else {
    state.eliminated[static_cast<std::size_t>(a.accuser)] = true;
    if (state.active_count() == 0) state.over = true;
  }
  return out;
}

std::vector<std::pair<PlayerId, int>> rank_players(const GameResult& result) {
  std::map<PlayerId, int> solve_order;
  for (const GameEvent& e : result.events) {
    if (const auto* a = std::get_if<AccusationMade>(&e.payload)) {
      if (a->correct && !solve_order.count(a->accusation.accuser)) {
        const int next = static_cast<int>(solve_order.size());
        solve_order[a->accusation.accuser] = next;
      }
    }
  }
  using Key = std::tuple<int, int, int, int, PlayerId>;
  std::vector<Key> keys;
  for (const PlayerStanding& s : result.players) {
    const auto solved = solve_order.find(s.player);
    const bool is_solver = solved != solve_order.end();
    const int round = s.accusation ? s.accusation_round : INT_MAX;
    keys.emplace_back(is_solver ? 0 : 1, is_solver ? solved->second : 0,
                      is_solver ? 0 : -s.accuracy, is_solver ? 0 : round, s.player);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<PlayerId, int>> out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out.emplace_back(std::get<4>(keys[i]), static_cast<int>(i) + 1);
  }
  return out;
}

HistoryEntry visible_entry(const GameEvent& event, const SuggestionMade& s, PlayerId viewer) {
  HistoryEntry h;
  h.turn_index = event.turn_index;
  h.round = event.round;
  h.suggester = s.suggestion.suggester;
  h.cards = s.suggestion.cards;
  h.passers = s.outcome.passers;
  h.disprover = s.outcome.disprover;
  if (viewer == s.suggestion.suggester || (s.outcome.disprover && viewer == *s.outcome.disprover)) {
    h.shown = s.outcome.shown_card;
  }
  return h;
}

CardSet PlayerView::shown_cards() const {
  CardSet out;
  for (const ShownToMe& s : shown_to_me) out.insert(s.card);
  return out;
}

PlayerView player_view(const GameState& state, PlayerId p) {
  const auto idx = static_cast<std::size_t>(p);
  PlayerView v;
  v.self = p;
  v.num_players = state.num_players();
  v.round = state.round;
  for (PlayerId q = 0; q < state.num_players(); ++q) {
    v.names.push_back(state.config.player_name(q));
    v.active.push_back(state.active(q));
  }
  v.hand_sizes = state.hand_sizes();
  v.deck = state.deck;
  v.hand = state.hand(p);
  for (const GameEvent& e : state.events) {
    const auto* s = std::get_if<SuggestionMade>(&e.payload);
    if (!s) continue;
    HistoryEntry h = visible_entry(e, *s, p);
    if (s->suggestion.suggester == p && h.shown) {
      v.shown_to_me.push_back({e.turn_index, e.round, *h.disprover, *h.shown});
    }
    v.history.push_back(std::move(h));
  }
  v.my_shows = state.show_history[idx];
  v.verified_deductions = state.verified_deductions[idx];
  v.last_reasoning = state.last_reasoning[idx];
  v.last_suggestion = state.last_suggestion[idx];
  v.last_deduction = state.last_deduction[idx];
  return v;
}

PromptContext make_context(const GameState& state, PlayerId p, bool forced_final) {
  PromptContext ctx;
  ctx.view = player_view(state, p);
  ctx.derived = derive_info(ctx.view);
  ctx.unknown_cards = ctx.view.deck - ctx.view.seen();
  ctx.forced_final = forced_final;
  return ctx;
}

Card heuristic_show_choice(CardSet matching, PlayerId suggester,
                           const std::vector<ShowRecord>& history) {
  CardSet pool = matching;
  CardSet to_suggester;
  std::array<int, Card::kCount> times{};
  for (const ShowRecord& r : history) {
    if (r.to == suggester) to_suggester.insert(r.card);
    ++times[r.card.id()];
  }
  if (!(to_suggester & matching).empty()) pool = to_suggester & matching;
  int best = 0;
  for (Card c : pool) best = std::max(best, times[c.id()]);
  if (best > 0) {
    CardSet most;
    for (Card c : pool) {
      if (times[c.id()] == best) most.insert(c);
    }
    pool = most;
  }
  // Ids run suspects, weapons, rooms, so the lowest id is the category tiebreak.
  return pool.first();
}

// ---------------------------------------------------------------------------
// Game loop

namespace {

class GameRunner {
 public:
  GameRunner(const GameConfig& config, std::span<Agent* const> agents, const EngineHooks& hooks)
      : agents_(agents),
        hooks_(hooks),
        state_(setup_game(config).state),
        truth_(GroundTruth::of(state_)),
        fallback_rng_(config.seed, "fallback") {
    if (static_cast<int>(agents.size()) != config.num_players) {
      throw InvalidConfig("need exactly one agent per player");
    }
  }

  GameResult run() {
    const GameConfig& cfg = state_.config;
    const int n = cfg.num_players;
    for (int round = 1; round <= cfg.round_limit && !state_.over; ++round) {
      state_.round = round;
      rounds_played_ = round;
      for (int k = 0; k < n && !state_.over; ++k) {
        const PlayerId p = (cfg.starting_seat + k) % n;
        if (state_.active(p)) take_turn(p);
      }
    }
    if (!state_.over && state_.active_count() > 0) forced_finals();
    state_.over = true;
    emit(GameEnded{state_.winner});
    return finish();
  }

 private:
  Agent& agent(PlayerId p) { return *agents_[static_cast<std::size_t>(p)]; }

  void emit(EventPayload payload) {
    const GameEvent& e = state_.emit(std::move(payload));
    if (hooks_.on_event) hooks_.on_event(state_, e);
  }

  bool in_deck(const Triple& t) const { return t.valid() && t.cards().is_subset_of(state_.deck); }

  Triple random_triple(const std::array<CardSet, 3>& pools) {
    std::array<Card, 3> pick{};
    for (Category cat : kCategories) {
      const auto k = static_cast<std::size_t>(cat);
      CardSet pool = pools[k].empty() ? state_.deck.of(cat) : pools[k];
      pick[k] = fallback_rng_.pick(pool.to_vector());
    }
    return Triple{pick[0], pick[1], pick[2]};
  }

  Triple random_suggestion() {
    return random_triple({state_.deck.of(Category::Suspect), state_.deck.of(Category::Weapon),
                          state_.deck.of(Category::Room)});
  }

  static void check_shape(const AgentDecision& d, Phase phase) {
    if (d.phase != phase) throw Error("agent returned a decision for the wrong phase");
    if (d.attempts.empty() || d.attempts.size() > static_cast<std::size_t>(kMaxAttempts)) {
      throw Error("agent decision must carry between 1 and 3 attempts");
    }
    if (d.fell_back != std::holds_alternative<std::monostate>(d.parsed)) {
      throw Error("agent decision must be parsed exactly when it did not fall back");
    }
    if (d.fell_back && d.attempt_count() != kMaxAttempts) {
      throw Error("agent fell back before exhausting its attempts");
    }
  }

  void take_turn(PlayerId p) {
    const auto idx = static_cast<std::size_t>(p);
    ++state_.turn_index;

    // Deduction phase.
    AgentDecision ded = agent(p).deduce(make_context(state_, p, false));
    check_shape(ded, Phase::Deduce);
    CardSet claimed;
    std::string analysis;
    if (ded.fell_back) {
      emit(FallbackTriggered{p, Phase::Deduce});
    } else {
      const auto& claim = std::get<DeductionClaim>(ded.parsed);
      claimed = claim.cards;
      analysis = claim.analysis;
    }
    const PlayerView before = player_view(state_, p);
    const auto cls = classify_claims(claimed, truth_, p, before.seen());
    state_.verified_deductions[idx] |= cls.correct;
    state_.last_deduction[idx] =
        analysis.empty() ? std::string()
                         : analysis + "\nDEDUCED_CARDS: " +
                               (claimed.empty() ? std::string("NONE") : join_names(claimed));
    emit(DeductionRecorded{p, claimed, cls.correct, cls.incorrect, cls.filtered, std::move(ded)});

    // Action phase.
    AgentDecision act = agent(p).act(make_context(state_, p, false));
    check_shape(act, Phase::Act);
    Move move;
    if (act.fell_back) {
      emit(FallbackTriggered{p, Phase::Act});
      move.suggestion = random_suggestion();
    } else {
      move = std::get<Move>(act.parsed);
      if (!in_deck(move.suggestion) || (move.accusation && !in_deck(*move.accusation))) {
        throw Error("agent move names cards outside the deck");
      }
    }

    if (move.accusation) {
      Accusation a{p, *move.accusation, state_.round, false};
      const auto res = apply_accusation(state_, a);
      emit(AccusationMade{a, res.correct, res.accuracy, std::move(act)});
      if (!res.correct) emit(PlayerEliminated{p});
    } else {
      Suggestion s{p, move.suggestion, state_.round, state_.turn_index};
      std::optional<AgentDecision> show;
      const auto outcome = resolve_suggestion(state_, s, [&](PlayerId d, CardSet matching) {
        if (matching.size() == 1) return matching.first();
        ShowRequest req{d, s, matching, state_.show_history[static_cast<std::size_t>(d)],
                        player_view(state_, d).names};
        AgentDecision dec = agent(d).show_card(req);
        check_shape(dec, Phase::ShowCard);
        Card card;
        if (dec.fell_back) {
          emit(FallbackTriggered{d, Phase::ShowCard});
          card = heuristic_show_choice(matching, p, req.history);
        } else {
          card = std::get<Show>(dec.parsed).card;
          if (!matching.contains(card)) throw Error("agent showed a card it cannot show");
        }
        show = std::move(dec);
        return card;
      });
      if (outcome.disprover) {
        state_.show_history[static_cast<std::size_t>(*outcome.disprover)].push_back(
            {state_.turn_index, p, *outcome.shown_card});
      }
      emit(SuggestionMade{s, outcome, std::move(act), std::move(show)});
      state_.last_suggestion[idx] = s;
    }
    state_.last_reasoning[idx] = move.reasoning;
  }

  void forced_finals() {
    const GameConfig& cfg = state_.config;
    const int n = cfg.num_players;
    state_.round = cfg.round_limit;
    std::vector<PlayerId> order;
    for (int k = 0; k < n; ++k) {
      const PlayerId p = (cfg.starting_seat + k) % n;
      if (state_.active(p)) order.push_back(p);
    }
    for (PlayerId p : order) {
      ++state_.turn_index;
      const PromptContext ctx = make_context(state_, p, true);
      AgentDecision act = agent(p).act(ctx);
      check_shape(act, Phase::Act);
      Triple guess;
      if (act.fell_back) {
        emit(FallbackTriggered{p, Phase::Act});
        guess = random_triple(ctx.derived.remaining);
      } else {
        const Move& m = std::get<Move>(act.parsed);
        guess = m.accusation.value_or(m.suggestion);
        if (!in_deck(guess)) throw Error("agent accusation names cards outside the deck");
      }
      Accusation a{p, guess, cfg.round_limit, true};
      const auto res = apply_accusation(state_, a);
      emit(AccusationMade{a, res.correct, res.accuracy, std::move(act)});
      if (!res.correct) emit(PlayerEliminated{p});
    }
  }

  GameResult finish() {
    GameResult r;
    r.winner = state_.winner;
    r.rounds_played = rounds_played_;
    r.solution = state_.solution;
    r.hands = state_.hands;
    for (PlayerId p = 0; p < state_.num_players(); ++p) {
      PlayerStanding s;
      s.player = p;
      s.eliminated = !state_.active(p);
      r.players.push_back(s);
    }
    for (const GameEvent& e : state_.events) {
      if (const auto* a = std::get_if<AccusationMade>(&e.payload)) {
        PlayerStanding& s = r.players[static_cast<std::size_t>(a->accusation.accuser)];
        s.accusation = a->accusation.cards;
        s.accuracy = a->accuracy;
        s.accusation_round = a->accusation.round;
        s.correct = a->correct;
      }
    }
    r.events = state_.events;
    for (const auto& [p, rank] : rank_players(r)) r.players[static_cast<std::size_t>(p)].rank = rank;
    return r;
  }

  std::span<Agent* const> agents_;
  const EngineHooks& hooks_;
  GameState state_;
  GroundTruth truth_;
  Rng fallback_rng_;
  int rounds_played_ = 0;
};

}  // namespace

GameResult run_game(const GameConfig& config, std::span<Agent* const> agents,
                    const EngineHooks& hooks) {
  return GameRunner(config, agents, hooks).run();
}

GameResult run_game(const GameConfig& config, const std::vector<std::unique_ptr<Agent>>& agents,
                    const EngineHooks& hooks) {
  std::vector<Agent*> raw;
  for (const auto& a : agents) raw.push_back(a.get());
  return run_game(config, std::span<Agent* const>(raw), hooks);
}

}  // namespace clue
