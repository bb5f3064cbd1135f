#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "clue/prompts.hpp"
#include "helpers.hpp"
#include "template_reference.hpp"

using namespace testing;

namespace {

GameState table() {
  return state_from_deal(config_of(6), T("Miss Scarlet", "Knife", "Study"),
                         {{0, cards({"Colonel Mustard", "Candlestick", "Ballroom"})},
                          {1, cards({"Mr. Green", "Lead Pipe", "Conservatory"})},
                          {2, cards({"Mrs. Peacock", "Rope", "Dining Room"})},
                          {3, cards({"Mrs. White", "Kitchen", "Billiard Room"})},
                          {4, cards({"Revolver", "Wrench", "Library"})},
                          {5, cards({"Professor Plum", "Lounge", "Hall"})}});
}

}  // namespace

TEST_CASE("shipped templates match the reference text") {
  CHECK(PromptTemplates::builtin().text(Phase::Deduce) == kReferenceDeduce);
  CHECK(PromptTemplates::builtin().text(Phase::ShowCard) == kReferenceShow);
  CHECK(PromptTemplates::builtin().text(Phase::Act) == std::string(kReferenceAct) + kReferenceMoveFormat);
  CHECK(PromptTemplates::placeholders(kReferenceShow) ==
        std::vector<std::string>{"suggester_name", "suggestion.suspect", "suggestion.weapon", "suggestion.room",
                                 "cards", "card_history", "suggester_name"});
}

TEST_CASE("empty history sentinel") {
  GameState st = table();
  const std::string p = render_prompt(Phase::Deduce, make_context(st, 0, false));
  CHECK(p.find("History: (none)") != std::string::npos);
  CHECK(p.find("Players still in the game: P1, P2, P3, P4, P5, P6") != std::string::npos);
  CHECK(matches_template(kReferenceDeduce, p));
}

TEST_CASE("show prompt follows suspect, weapon, room order") {
  GameState st = table();
  ShowRequest req{3, Suggestion{0, T("Mrs. White", "Rope", "Kitchen"), 1, 1}, cards({"Mrs. White", "Kitchen"}),
                  {}, player_view(st, 3).names};
  const std::string p = render_show_prompt(req);
  CHECK(p.find("Mrs. White with Rope in Kitchen") != std::string::npos);
  CHECK(p.find("Another player (P1) has made a suggestion") != std::string::npos);
  CHECK(p.find("can disprove this suggestion: Mrs. White, Kitchen") != std::string::npos);
  CHECK(p.find("to whom): \n(none)\n") != std::string::npos);
  CHECK(matches_template(kReferenceShow, p));
  req.history.push_back({4, 0, C("Kitchen")});
  CHECK(render_show_prompt(req).find("- Kitchen to P1 (T4)") != std::string::npos);
}

TEST_CASE("prompts are byte-stable and serialize history lines") {
  GameState st = table();
  play_suggestion(st, 0, T("Mrs. White", "Rope", "Kitchen"));
  play_suggestion(st, 1, T("Mr. Green", "Lead Pipe", "Conservatory"));
  const PromptContext a = make_context(st, 0, false);
  const PromptContext b = make_context(st, 0, false);
  CHECK(render_prompt(Phase::Act, a) == render_prompt(Phase::Act, b));
  const std::string act = render_prompt(Phase::Act, a);
  CHECK(act.find("T1. P1 suggested: Mrs. White, Rope, Kitchen --> disproved by P3 (passed: P2) [shown to you: Rope]") !=
        std::string::npos);
  CHECK(act.find("T2. P2 suggested: Mr. Green, Lead Pipe, Conservatory --> not disproved (passed: P3, P4, P5, P6, P1)") !=
        std::string::npos);
  CHECK(act.find("Your last suggestion: Mrs. White, Rope, Kitchen --> disproved by P3 (showed you Rope)") !=
        std::string::npos);
  CHECK(matches_template(std::string(kReferenceAct) + kReferenceMoveFormat, act));
  CHECK(matches_template(kReferenceAct, act.substr(0, act.find("SUMMARY: <"))));
  // Outsiders see the disproof but not the card.
  const std::string outsider = render_prompt(Phase::Deduce, make_context(st, 4, false));
  CHECK(outsider.find("disproved by P3 (passed: P2)\n") != std::string::npos);
  CHECK(outsider.find("Rope]") == std::string::npos);
  const std::string disprover = render_prompt(Phase::Deduce, make_context(st, 2, false));
  CHECK(disprover.find("[you showed: Rope]") != std::string::npos);
}

TEST_CASE("history round-trips through its text form") {
  GameState st = table();
  play_suggestion(st, 0, T("Mrs. White", "Rope", "Kitchen"));
  play_suggestion(st, 1, T("Mr. Green", "Lead Pipe", "Conservatory"));
  play_suggestion(st, 4, T("Professor Plum", "Wrench", "Hall"));
  for (PlayerId p : {0, 2, 4}) {
    const PlayerView v = player_view(st, p);
    const auto back = parse_history(serialize_history(v.history, v.names), v.names);
    REQUIRE(back.size() == v.history.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      HistoryEntry expect = v.history[i];
      expect.round = 0;
      CHECK(back[i] == expect);
    }
  }
  CHECK(parse_history("History: (none)", {}).empty());
}

TEST_CASE("missing placeholder values") {
  CHECK_THROWS_AS(PromptTemplates::builtin().render(Phase::ShowCard, {}), MissingContext);
  auto values = show_prompt_values(ShowRequest{1, Suggestion{0, T("Mrs. White", "Rope", "Kitchen"), 1, 1},
                                               cards({"Rope"}), {}, {"P1", "P2"}});
  values.erase("card_history");
  try {
    PromptTemplates::builtin().render(Phase::ShowCard, values);
    FAIL("render should throw");
  } catch (const MissingContext& e) {
    CHECK(std::string(e.what()).find("{card_history}") != std::string::npos);
  }
}

TEST_CASE("forced final accusations are announced") {
  GameState st = table();
  const std::string p = render_prompt(Phase::Act, make_context(st, 0, true));
  CHECK(p.find("FINAL ACCUSATION") != std::string::npos);
  CHECK(render_prompt(Phase::Act, make_context(st, 0, false)).find("FINAL ACCUSATION") == std::string::npos);
}

TEST_CASE("template directory overrides fall back per file") {
  const auto dir = std::filesystem::temp_directory_path() / "clue_prompt_override";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "show.txt") << "Show {cards} to {suggester_name}.";
  const PromptTemplates t = PromptTemplates::load(dir);
  CHECK(t.text(Phase::ShowCard) == "Show {cards} to {suggester_name}.");
  CHECK(t.text(Phase::Deduce) == kReferenceDeduce);
  std::filesystem::remove_all(dir);
}

TEST_CASE("reprompt suffix") {
  CHECK(reprompt_suffix("arity") ==
        "\n\nYour previous response could not be used (arity). Respond again, following the required format exactly.");
}
