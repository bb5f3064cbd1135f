#include <doctest.h>

#include "helpers.hpp"

using namespace testing;

namespace {

ParseFailure failure_of(Phase phase, const std::string& text) {
  try {
    parse_phase_response(phase, text);
  } catch (const ParseError& e) {
    return e.reason;
  }
  FAIL("expected a parse error for: " << text);
  return ParseFailure::MissingLabel;
}

}  // namespace

TEST_CASE("deduction grammar") {
  const auto d = parse_deduction("ANALYSIS: a\nDEDUCED_CARDS: Rope, Miss Scarlet");
  CHECK(d.analysis == "a");
  CHECK(d.cards == cards({"Rope", "Miss Scarlet"}));
  const auto none = parse_deduction("ANALYSIS: x\nDEDUCED_CARDS: NONE");
  CHECK(none.cards.empty());
  CHECK(parse_deduction("analysis: x\ndeduced_cards: none").cards.empty());
  CHECK(failure_of(Phase::Deduce, "DEDUCED_CARDS: Rope") == ParseFailure::MissingLabel);
  CHECK(failure_of(Phase::Deduce, "ANALYSIS: x\nDEDUCED_CARDS: Dagger") == ParseFailure::UnknownCard);
  CHECK(failure_of(Phase::Deduce, "ANALYSIS:\nDEDUCED_CARDS: NONE") == ParseFailure::EmptyReasoning);
}

TEST_CASE("move grammar") {
  const std::string text =
      "SUMMARY: Testing a theory.\nREASONING: White is unseen.\nSUGGESTION: Mrs. White, Rope, Kitchen\nACCUSATION: NONE";
  const Move m = parse_move(text);
  CHECK(m.suggestion == T("Mrs. White", "Rope", "Kitchen"));
  CHECK_FALSE(m.accusation.has_value());
  CHECK(m.summary == "Testing a theory.");

  const Move acc = parse_move(
      "SUMMARY: s\nREASONING: r\nSUGGESTION: Kitchen, Rope, Mrs. White\nACCUSATION: Mrs. White, Rope, Kitchen");
  CHECK(acc.suggestion == T("Mrs. White", "Rope", "Kitchen"));
  CHECK(acc.accusation == T("Mrs. White", "Rope", "Kitchen"));

  CHECK(failure_of(Phase::Act, "SUMMARY: s\nREASONING: r\nSUGGESTION: Miss Scarlet, Knife\nACCUSATION: NONE") ==
        ParseFailure::Arity);
  CHECK(failure_of(Phase::Act, "SUMMARY: s\nREASONING: r\nSUGGESTION: Miss Scarlet, Kitchen, Hall\nACCUSATION: NONE") ==
        ParseFailure::Arity);
  CHECK(failure_of(Phase::Act, "SUMMARY: s\nREASONING: \nSUGGESTION: Miss Scarlet, Knife, Hall\nACCUSATION: NONE") ==
        ParseFailure::EmptyReasoning);
  CHECK(failure_of(Phase::Act, "SUMMARY: s\nREASONING: r\nSUGGESTION: Miss Scarlet, Knife, Hall") ==
        ParseFailure::MissingLabel);
}

TEST_CASE("fences, emphasis and multi-line values") {
  const std::string plain = "REASONING: least informative\nSHOW: Rope";
  const std::string fenced = "Here you go:\n```\nREASONING: least informative\nSHOW: Rope\n```\n";
  CHECK(parse_show(fenced) == parse_show(plain));
  CHECK(parse_show("**REASONING:** least informative\n**SHOW:** Rope") == parse_show(plain));
  const auto multi = parse_move("SUMMARY: s\nREASONING: line one\nline two\nSUGGESTION: Mrs. White, Rope, Kitchen\nACCUSATION: none");
  CHECK(multi.reasoning == "line one\nline two");
  CHECK(parse_show("REASONING: r\r\nSHOW: Rope.\r\n").card == C("Rope"));
  CHECK(failure_of(Phase::ShowCard, "REASONING: r\nSHOW: Rope, Knife") == ParseFailure::Arity);
}

TEST_CASE("canonical rendering parses back") {
  const std::vector<Parsed> samples{
      DeductionClaim{"because", cards({"Rope", "Hall"})},
      DeductionClaim{"nothing", {}},
      Move{"s", "r", T("Mrs. White", "Rope", "Kitchen"), std::nullopt},
      Move{"s", "r", T("Mrs. White", "Rope", "Kitchen"), T("Miss Scarlet", "Knife", "Study")},
      Show{"why", C("Lead Pipe")},
  };
  const std::vector<Phase> phases{Phase::Deduce, Phase::Deduce, Phase::Act, Phase::Act, Phase::ShowCard};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(parse_phase_response(phases[i], render_response(samples[i])) == samples[i]);
  }
}
