#include <doctest.h>

#include "clue/prompts.hpp"
#include "helpers.hpp"

using namespace testing;

namespace {

GameState table() {
  return state_from_deal(config_of(6), T("Miss Scarlet", "Knife", "Study"),
                         {{0, cards({"Colonel Mustard", "Candlestick", "Ballroom"})},
                          {1, cards({"Mr. Green", "Lead Pipe", "Conservatory"})},
                          {2, cards({"Mrs. Peacock", "Rope", "Kitchen"})},
                          {3, cards({"Mrs. White", "Dining Room", "Billiard Room"})},
                          {4, cards({"Revolver", "Wrench", "Library"})},
                          {5, cards({"Professor Plum", "Lounge", "Hall"})}});
}

// Protocol agent answering from a fixed list of texts, one per attempt.
std::unique_ptr<ProtocolAgent> scripted(Phase phase, std::vector<std::string> texts) {
  auto src = std::make_unique<RecordedSource>();
  for (auto& t : texts) src->push(phase, Attempt{t, "", ""});
  return std::make_unique<ProtocolAgent>(std::move(src));
}

const char* kGarbage = "I think it was the butler.";

}  // namespace

TEST_CASE("protocol: clean deduction in one attempt") {
  GameState st = table();
  auto agent = scripted(Phase::Deduce, {"ANALYSIS: x\nDEDUCED_CARDS: NONE"});
  const AgentDecision d = agent->deduce(make_context(st, 0, false));
  CHECK_FALSE(d.fell_back);
  CHECK(d.attempt_count() == 1);
  CHECK(std::get<DeductionClaim>(d.parsed).cards.empty());
  CHECK(agent->prompts().size() == 1);
  CHECK(agent->prompts()[0].rfind("DEDUCTION PHASE", 0) == 0);
}

TEST_CASE("protocol: garbage three times falls back") {
  GameState st = table();
  auto agent = scripted(Phase::Deduce, {kGarbage, kGarbage, kGarbage});
  const AgentDecision d = agent->deduce(make_context(st, 0, false));
  CHECK(d.fell_back);
  CHECK(d.attempt_count() == 3);
  CHECK(std::holds_alternative<std::monostate>(d.parsed));
  for (const Attempt& a : d.attempts) CHECK(a.parse_error.find("missing label") != std::string::npos);
  // Re-prompts repeat the original prompt with the reason appended.
  REQUIRE(agent->prompts().size() == 3);
  CHECK(agent->prompts()[1].rfind(agent->prompts()[0], 0) == 0);
  CHECK(agent->prompts()[1].find("could not be used (missing label") != std::string::npos);
}

TEST_CASE("protocol: recovers on the k-th attempt") {
  GameState st = table();
  const std::string good = "SUMMARY: s\nREASONING: r\nSUGGESTION: Mrs. White, Rope, Kitchen\nACCUSATION: NONE";
  const std::string two_rooms = "SUMMARY: s\nREASONING: r\nSUGGESTION: Mrs. White, Hall, Kitchen\nACCUSATION: NONE";
  for (int k = 0; k < 3; ++k) {
    std::vector<std::string> texts(static_cast<std::size_t>(k), two_rooms);
    texts.push_back(good);
    auto agent = scripted(Phase::Act, texts);
    const AgentDecision d = agent->act(make_context(st, 0, false));
    CHECK_FALSE(d.fell_back);
    CHECK(d.attempt_count() == k + 1);
    CHECK(std::get<Move>(d.parsed).suggestion == T("Mrs. White", "Rope", "Kitchen"));
    for (int i = 0; i < k; ++i) CHECK(d.attempts[static_cast<std::size_t>(i)].parse_error.rfind("arity", 0) == 0);
  }
}

TEST_CASE("protocol: cards outside a reduced deck are rejected") {
  GameConfig cfg = config_of(3);
  cfg.deck = DeckShape{3, 3, 3};
  GameState st = state_from_deal(cfg, T("Mrs. White", "Lead Pipe", "Conservatory"),
                                 {{0, cards({"Miss Scarlet", "Knife"})},
                                  {1, cards({"Colonel Mustard", "Kitchen"})},
                                  {2, cards({"Candlestick", "Ballroom"})}});
  auto agent = scripted(Phase::Act, {"SUMMARY: s\nREASONING: r\nSUGGESTION: Mrs. White, Rope, Kitchen\nACCUSATION: NONE",
                                     "SUMMARY: s\nREASONING: r\nSUGGESTION: Mrs. White, Knife, Kitchen\nACCUSATION: NONE"});
  const AgentDecision d = agent->act(make_context(st, 0, false));
  CHECK(d.attempt_count() == 2);
  CHECK(d.attempts[0].parse_error.rfind("invalid choice", 0) == 0);
}

TEST_CASE("protocol: showing a card that cannot be shown") {
  GameState st = table();
  ShowRequest req{2, Suggestion{0, T("Mrs. Peacock", "Rope", "Kitchen"), 1, 1}, cards({"Rope", "Kitchen"}),
                  {{1, 0, C("Kitchen")}}, player_view(st, 2).names};
  auto agent = scripted(Phase::ShowCard, {"REASONING: r\nSHOW: Revolver", "REASONING: r\nSHOW: Revolver",
                                          "REASONING: r\nSHOW: Revolver"});
  const AgentDecision d = agent->show_card(req);
  CHECK(d.fell_back);
  CHECK(d.attempts[0].parse_error.rfind("invalid choice", 0) == 0);
  // The fallback the engine applies is the heuristic choice.
  CHECK(heuristic_show_choice(req.matching, 0, req.history) == C("Kitchen"));
}

TEST_CASE("protocol: a failed model call uses up an attempt") {
  GameState st = table();
  auto src = std::make_unique<RecordedSource>();
  src->push(Phase::Deduce, Attempt{"", "timeout", ""});
  src->push(Phase::Deduce, Attempt{"ANALYSIS: a\nDEDUCED_CARDS: Rope", "", ""});
  ProtocolAgent agent(std::move(src));
  const AgentDecision d = agent.deduce(make_context(st, 0, false));
  CHECK(d.attempt_count() == 2);
  CHECK(d.attempts[0].error == "timeout");
  CHECK(std::get<DeductionClaim>(d.parsed).cards == cards({"Rope"}));
  CHECK(agent.prompts()[1].find("the model call failed: timeout") != std::string::npos);
}

TEST_CASE("oracle show heuristic") {
  std::vector<ShowRecord> history{{3, 4, C("Rope")}, {5, 1, C("Kitchen")}, {6, 2, C("Kitchen")}};
  // Already shown to this suggester wins.
  CHECK(heuristic_show_choice(cards({"Rope", "Kitchen"}), 4, history) == C("Rope"));
  // Otherwise the card shown most often.
  CHECK(heuristic_show_choice(cards({"Rope", "Kitchen"}), 5, history) == C("Kitchen"));
  // Otherwise suspects before weapons before rooms.
  CHECK(heuristic_show_choice(cards({"Mrs. Peacock", "Knife"}), 5, {}) == C("Mrs. Peacock"));
  GameState st = table();
  OracleAgent oracle(1);
  ShowRequest req{2, Suggestion{4, T("Mrs. Peacock", "Rope", "Kitchen"), 1, 1}, cards({"Rope", "Kitchen"}), history,
                  player_view(st, 2).names};
  CHECK(std::get<Show>(oracle.show_card(req).parsed).card == C("Rope"));
}

TEST_CASE("single matching card is shown without asking") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GameConfig cfg = config_of(4, seed);
    std::vector<std::unique_ptr<Agent>> agents;
    std::vector<ScriptedAgent*> raw;
    for (int p = 0; p < 4; ++p) {
      auto a = std::make_unique<ScriptedAgent>();
      raw.push_back(a.get());
      agents.push_back(std::move(a));
    }
    const GameResult r = run_game(cfg, agents);
    int multi = 0;
    for (const GameEvent& e : r.events) {
      if (const auto* s = std::get_if<SuggestionMade>(&e.payload)) {
        if (!s->outcome.disprover) continue;
        const CardSet m = r.hands[static_cast<std::size_t>(*s->outcome.disprover)].cards & s->suggestion.cards.cards();
        multi += m.size() > 1;
        CHECK((m.size() > 1) == s->show.has_value());
      }
    }
    int asked = 0;
    for (auto* a : raw) asked += a->show_calls;
    CHECK(asked == multi);
  }
}

TEST_CASE("random agent") {
  GameState st = table();
  RandomAgent agent(9);
  const PromptContext ctx = make_context(st, 0, false);
  CHECK(std::get<DeductionClaim>(agent.deduce(ctx).parsed).cards.empty());
  for (int i = 0; i < 50; ++i) {
    const Move m = std::get<Move>(agent.act(ctx).parsed);
    CHECK(m.suggestion.valid());
    CHECK_FALSE(m.accusation.has_value());
  }
  const Move final_move = std::get<Move>(agent.act(make_context(st, 0, true)).parsed);
  REQUIRE(final_move.accusation.has_value());
  // Forced guesses stay within the direct-elimination candidates.
  CHECK_FALSE(ctx.view.seen().contains(final_move.accusation->suspect));
  ShowRequest req{2, Suggestion{0, T("Mrs. Peacock", "Rope", "Kitchen"), 1, 1}, cards({"Rope", "Kitchen"}), {},
                  player_view(st, 2).names};
  for (int i = 0; i < 20; ++i) CHECK(req.matching.contains(std::get<Show>(agent.show_card(req).parsed).card));
  // Decisions carry the canonical text that parses back.
  const AgentDecision d = agent.act(ctx);
  CHECK(d.attempt_count() == 1);
  CHECK(parse_phase_response(Phase::Act, d.raw_text()) == d.parsed);
}

TEST_CASE("oracle accuses once the envelope is certain") {
  GameState st = table();
  // Everyone else's hand laid bare to P1 through shows.
  for (PlayerId q = 1; q < 6; ++q) {
    for (Card c : st.hand(q)) st.verified_deductions[0].insert(c);
  }
  OracleAgent oracle(2);
  const Move m = std::get<Move>(oracle.act(make_context(st, 0, false)).parsed);
  REQUIRE(m.accusation.has_value());
  CHECK(*m.accusation == st.solution);
}

TEST_CASE("oracle suggestions are legal and reproducible") {
  GameState st = table();
  play_suggestion(st, 0, T("Mrs. White", "Rope", "Kitchen"));
  OracleAgent a(4), b(4);
  const auto ctx = make_context(st, 0, false);
  const AgentDecision da = a.act(ctx), db = b.act(ctx);
  CHECK(da == db);
  const Move m = std::get<Move>(da.parsed);
  CHECK(m.suggestion.valid());
  CHECK_FALSE(m.accusation.has_value());
}

TEST_CASE("factory seats each kind") {
  AgentFactoryContext ctx;
  ctx.game_seed = 3;
  CHECK(dynamic_cast<RandomAgent*>(make_agent(AgentSpec{}, 0, ctx).get()));
  CHECK(dynamic_cast<OracleAgent*>(make_agent(AgentSpec{AgentKind::Oracle}, 0, ctx).get()));
  AgentSpec llm{AgentKind::Llm, "m", "mock"};
  CHECK_THROWS_AS(make_agent(llm, 0, ctx), InvalidConfig);
  Gateway gw(std::make_shared<CallbackBackend>([](const CompletionRequest&) { return std::string("x"); }));
  ctx.gateways["mock"] = &gw;
  CHECK(dynamic_cast<ProtocolAgent*>(make_agent(llm, 0, ctx).get()));
  CHECK(agent_seed(3, 0) != agent_seed(3, 1));
}
