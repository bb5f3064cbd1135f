#include "clue/agents.hpp"

#include <bit>
#include <cmath>
#include <set>

#include "clue/engine.hpp"
#include "clue/response_parser.hpp"

namespace clue {

AgentDecision canonical_decision(Phase phase, Parsed parsed) {
  AgentDecision d;
  d.phase = phase;
  d.attempts.push_back(Attempt{render_response(parsed), "", ""});
  d.parsed = std::move(parsed);
  return d;
}

std::uint64_t agent_seed(std::uint64_t game_seed, PlayerId seat) {
  return derive_seed(game_seed, "agent/" + std::to_string(seat));
}

namespace {

Triple pick_triple(Rng& rng, const std::array<CardSet, 3>& pools) {
  return Triple{rng.pick(pools[0].to_vector()), rng.pick(pools[1].to_vector()),
                rng.pick(pools[2].to_vector())};
}

std::array<CardSet, 3> deck_pools(CardSet deck) {
  return {deck.of(Category::Suspect), deck.of(Category::Weapon), deck.of(Category::Room)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Random

AgentDecision RandomAgent::deduce(const PromptContext&) {
  return canonical_decision(Phase::Deduce, DeductionClaim{"No deductions attempted.", {}});
}

AgentDecision RandomAgent::act(const PromptContext& ctx) {
  const auto& rem = ctx.derived.remaining;
  const bool pinned = rem[0].size() == 1 && rem[1].size() == 1 && rem[2].size() == 1;
  Move m;
  m.summary = "Random play.";
  if (pinned || ctx.forced_final) {
    std::array<CardSet, 3> pools = rem;
    for (std::size_t k = 0; k < 3; ++k) {
      if (pools[k].empty()) pools[k] = deck_pools(ctx.view.deck)[k];
    }
    m.accusation = pick_triple(rng_, pools);
    m.suggestion = *m.accusation;
    m.reasoning = pinned ? "Every category has a single candidate left." : "Forced to accuse.";
  } else {
    m.suggestion = pick_triple(rng_, deck_pools(ctx.view.deck));
    m.reasoning = "Uniformly random suggestion.";
  }
  return canonical_decision(Phase::Act, m);
}

AgentDecision RandomAgent::show_card(const ShowRequest& req) {
  return canonical_decision(Phase::ShowCard,
                            Show{"Uniformly random choice.", rng_.pick(req.matching.to_vector())});
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

std::array<LocationMask, Card::kCount> masks_of(const KnowledgeBase& kb) {
  std::array<LocationMask, Card::kCount> out{};
  for (Card c : kb.deck()) out[c.id()] = kb.possible(c);
  return out;
}

// Sum of log2 of the number of possible locations per card: zero when every
// card is located.
double uncertainty(const KnowledgeBase& kb) {
  double total = 0;
  for (Card c : kb.deck()) total += std::log2(static_cast<double>(std::popcount(kb.possible(c))));
  return total;
}

KnowledgeBase restricted(KnowledgeBase kb, const std::array<LocationMask, Card::kCount>& masks) {
  for (Card c : kb.deck()) {
    for (Location loc : kb.candidates(c)) {
      if (!(masks[c.id()] & kb.bit(loc))) kb.exclude(c, loc);
    }
  }
  return kb;
}

}  // namespace

std::array<LocationMask, Card::kCount> OracleAgent::analyse(const PlayerView& view) const {
  const KnowledgeBase kb = propagate(KnowledgeBase::from_view(view)).kb;
  try {
    return exact_possibilities(kb, options_.node_cap);
  } catch (const CapExceeded&) {
    return masks_of(kb);
  }
}

AgentDecision OracleAgent::deduce(const PromptContext& ctx) {
  const PlayerView& v = ctx.view;
  const auto masks = analyse(v);
  const LocationMask env = LocationMask{1} << v.num_players;
  CardSet claims;
  for (Card c : v.deck - v.seen()) {
    if (!(masks[c.id()] & env)) claims.insert(c);
  }
  const std::string analysis =
      claims.empty() ? "No new card can be placed outside the envelope."
                     : std::to_string(claims.size()) +
                           " unseen card(s) are held by opponents in every consistent deal.";
  return canonical_decision(Phase::Deduce, DeductionClaim{analysis, claims});
}

AgentDecision OracleAgent::act(const PromptContext& ctx) {
  const PlayerView& v = ctx.view;
  const auto masks = analyse(v);
  const LocationMask env = LocationMask{1} << v.num_players;
  std::array<CardSet, 3> env_cands;
  for (Card c : v.deck) {
    if (masks[c.id()] & env) env_cands[static_cast<std::size_t>(c.category())].insert(c);
  }
  const bool certain =
      env_cands[0].size() == 1 && env_cands[1].size() == 1 && env_cands[2].size() == 1;

  Move m;
  if (certain || ctx.forced_final) {
    for (std::size_t k = 0; k < 3; ++k) {
      if (env_cands[k].empty()) env_cands[k] = deck_pools(v.deck)[k];
    }
    m.accusation = certain ? Triple{env_cands[0].first(), env_cands[1].first(), env_cands[2].first()}
                           : pick_triple(rng_, env_cands);
    m.suggestion = *m.accusation;
    m.summary = certain ? "The envelope is determined." : "Final accusation under uncertainty.";
    m.reasoning = certain ? "Every consistent deal puts the same three cards in the envelope."
                          : "Best guess among the remaining envelope candidates.";
    return canonical_decision(Phase::Act, m);
  }

  // Candidate pool: envelope candidates plus own cards, per category.
  std::array<std::vector<Card>, 3> per_cat;
  std::size_t combos = 1;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto cat = kCategories[k];
    per_cat[k] = (env_cands[k] | v.hand.of(cat)).to_vector();
    combos *= per_cat[k].size();
  }
  std::vector<Triple> pool;
  const auto cap = static_cast<std::size_t>(std::max(1, options_.pool_size));
  if (combos <= cap) {
    for (Card s : per_cat[0])
      for (Card w : per_cat[1])
        for (Card r : per_cat[2]) pool.push_back(Triple{s, w, r});
  } else {
    std::set<std::tuple<int, int, int>> taken;
    while (pool.size() < cap) {
      const Triple t{rng_.pick(per_cat[0]), rng_.pick(per_cat[1]), rng_.pick(per_cat[2])};
      if (taken.insert({t.suspect.id(), t.weapon.id(), t.room.id()}).second) pool.push_back(t);
    }
  }

  const KnowledgeBase base = restricted(KnowledgeBase::from_view(v), masks);
  const int n = v.num_players;
  double best_score = 0;
  int best_own = -1;
  std::optional<Triple> best;
  for (const Triple& t : pool) {
    double worst = -1;
    std::vector<PlayerId> passers;
    auto consider = [&](const HistoryEntry& entry) {
      try {
        KnowledgeBase kb = base;
        kb.ingest(entry);
        worst = std::max(worst, uncertainty(propagate(std::move(kb)).kb));
      } catch (const Inconsistent&) {
        // outcome impossible
      }
    };
    for (int k = 1; k < n; ++k) {
      const PlayerId q = (v.self + k) % n;
      for (Card c : t.cards()) {
        if (v.hand.contains(c) || !(base.possible(c) & (LocationMask{1} << q))) continue;
        consider(HistoryEntry{0, v.round, v.self, t, passers, q, c});
      }
      passers.push_back(q);
    }
    consider(HistoryEntry{0, v.round, v.self, t, passers, std::nullopt, std::nullopt});
    const int own = (t.cards() & v.hand).empty() ? 0 : 1;
    if (!best || worst < best_score - 1e-9 || (std::abs(worst - best_score) <= 1e-9 && own > best_own)) {
      best = t;
      best_score = worst;
      best_own = own;
    }
  }
  m.suggestion = *best;
  m.summary = "Probing the most informative suggestion.";
  char buf[96];
  std::snprintf(buf, sizeof buf, "Worst-case remaining uncertainty %.3f bits.", best_score);
  m.reasoning = buf;
  return canonical_decision(Phase::Act, m);
}

AgentDecision OracleAgent::show_card(const ShowRequest& req) {
  const Card c = heuristic_show_choice(req.matching, req.suggestion.suggester, req.history);
  return canonical_decision(Phase::ShowCard,
                            Show{"Reveal the card that gives away the least.", c});
}

// ---------------------------------------------------------------------------
// Response sources

Attempt GatewaySource::respond(Phase, const std::string& prompt) {
  CompletionRequest req;
  req.model_id = settings_.model_id;
  req.user_text = prompt;
  req.temperature = settings_.temperature;
  req.max_tokens = settings_.max_tokens;
  req.timeout = settings_.timeout;
  try {
    return Attempt{gateway_.complete(req, log_), "", ""};
  } catch (const GatewayError& e) {
    return Attempt{"", std::string(gateway_error_name(e.cls)), ""};
  }
}

Attempt RecordedSource::respond(Phase phase, const std::string&) {
  auto& q = queues_[phase];
  if (q.empty()) throw Error("no recorded response left for the " + std::string(phase_name(phase)) + " phase");
  Attempt a = q.front();
  q.pop_front();
  // Only the raw material is replayed; the protocol re-derives parse errors.
  a.parse_error.clear();
  return a;
}

bool RecordedSource::exhausted() const {
  for (const auto& [phase, q] : queues_) {
    if (!q.empty()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Protocol

template <class Validate>
AgentDecision ProtocolAgent::run(Phase phase, const std::string& prompt, Validate validate) {
  std::vector<Attempt> attempts;
  std::string reason;
  for (int i = 0; i < kMaxAttempts; ++i) {
    const std::string text = i == 0 ? prompt : prompt + reprompt_suffix(reason);
    prompts_.push_back(text);
    Attempt a = source_->respond(phase, text);
    if (!a.error.empty()) {
      reason = "the model call failed: " + a.error;
      attempts.push_back(std::move(a));
      continue;
    }
    try {
      Parsed p = parse_phase_response(phase, a.text);
      validate(p);
      attempts.push_back(std::move(a));
      AgentDecision d;
      d.phase = phase;
      d.attempts = std::move(attempts);
      d.parsed = std::move(p);
      return d;
    } catch (const ParseError& e) {
      a.parse_error = e.what();
      reason = e.what();
      attempts.push_back(std::move(a));
    }
  }
  return fallback_decision(phase, std::move(attempts));
}

namespace {

void require_in_deck(const Triple& t, CardSet deck, const char* label) {
  if (!t.cards().is_subset_of(deck)) {
    throw ParseError(ParseFailure::InvalidChoice,
                     std::string(label) + " names a card that is not in play: " + t.to_string());
  }
}

}  // namespace

AgentDecision ProtocolAgent::deduce(const PromptContext& ctx) {
  return run(Phase::Deduce, render_prompt(Phase::Deduce, ctx, templates_), [](const Parsed&) {});
}

AgentDecision ProtocolAgent::act(const PromptContext& ctx) {
  const CardSet deck = ctx.view.deck;
  return run(Phase::Act, render_prompt(Phase::Act, ctx, templates_), [deck](const Parsed& p) {
    const Move& m = std::get<Move>(p);
    require_in_deck(m.suggestion, deck, "SUGGESTION");
    if (m.accusation) require_in_deck(*m.accusation, deck, "ACCUSATION");
  });
}

AgentDecision ProtocolAgent::show_card(const ShowRequest& req) {
  const CardSet matching = req.matching;
  return run(Phase::ShowCard, render_show_prompt(req, templates_), [matching](const Parsed& p) {
    const Card c = std::get<Show>(p).card;
    if (!matching.contains(c)) {
      throw ParseError(ParseFailure::InvalidChoice,
                       std::string(c.name()) + " is not one of the cards you can show (" +
                           join_names(matching) + ")");
    }
  });
}

// ---------------------------------------------------------------------------
// Factory

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, PlayerId seat,
                                  const AgentFactoryContext& ctx) {
  const std::uint64_t seed = agent_seed(ctx.game_seed, seat);
  switch (spec.kind) {
    case AgentKind::Random: return std::make_unique<RandomAgent>(seed);
    case AgentKind::Oracle: return std::make_unique<OracleAgent>(seed, ctx.oracle);
    case AgentKind::Llm: {
      const auto it = ctx.gateways.find(spec.provider);
      if (it == ctx.gateways.end() || !it->second) {
        throw InvalidConfig("no gateway configured for provider '" + spec.provider + "'");
      }
      ModelSettings settings;
      settings.model_id = spec.model_id;
      settings.temperature = spec.temperature;
      settings.max_tokens = ctx.max_tokens;
      settings.timeout = ctx.timeout;
      auto source = std::make_unique<GatewaySource>(*it->second, settings, ctx.gateway_log);
      return std::make_unique<ProtocolAgent>(
          std::move(source), ctx.templates ? *ctx.templates : PromptTemplates::builtin());
    }
  }
  throw InvalidConfig("unknown agent kind");
}

}  // namespace clue
