#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "clue/game_log.hpp"
#include "helpers.hpp"

using namespace testing;
using nlohmann::json;

namespace {

GameLog sample_log(std::uint64_t seed = 4, AgentKind kind = AgentKind::Random) {
  GameConfig cfg = config_of(6, seed, kind);
  cfg.agents[0].kind = AgentKind::Oracle;
  return make_log(cfg, run_game(cfg, seat_agents(cfg)), "t", 0);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace

TEST_CASE("write then read gives the same log") {
  const GameLog log = sample_log();
  const auto path = std::filesystem::temp_directory_path() / "clue_log_roundtrip.jsonl";
  write_log(path, log);
  const GameLog back = read_log(path);
  CHECK(back == log);
  CHECK(to_jsonl(back) == to_jsonl(log));
  std::filesystem::remove(path);
  const auto lines = lines_of(to_jsonl(log));
  CHECK(json::parse(lines.front())["type"] == "header");
  CHECK(json::parse(lines.back())["type"] == "sealed");
  CHECK(json::parse(lines[lines.size() - 2])["type"] == "result");
}

TEST_CASE("logs replay cleanly") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GameLog log = sample_log(seed);
    const GameResult r = replay(log);
    CHECK(r.events == log.events);
  }
}

TEST_CASE("truncation is reported with its byte offset") {
  const std::string text = to_jsonl(sample_log());
  const auto lines = lines_of(text);
  const std::size_t keep = text.size() - lines.back().size() / 2 - 1;
  try {
    parse_log(text.substr(0, keep));
    FAIL("expected CorruptLog");
  } catch (const CorruptLog& e) {
    CHECK(e.offset == text.size() - lines.back().size() - 1);
  }
  // Dropping whole trailing records is also caught.
  std::vector<std::string> head(lines.begin(), lines.end() - 2);
  CHECK_THROWS_AS(parse_log(join_lines(head)), CorruptLog);
  try {
    std::vector<std::string> bad = lines;
    bad[3] = "{not json";
    parse_log(join_lines(bad));
    FAIL("expected CorruptLog");
  } catch (const CorruptLog& e) {
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) start += lines[static_cast<std::size_t>(i)].size() + 1;
    CHECK(e.offset >= start);
    CHECK(e.offset < start + 10);
  }
}

TEST_CASE("a newer schema names both versions") {
  auto lines = lines_of(to_jsonl(sample_log()));
  json h = json::parse(lines[0]);
  h["schema_version"] = 2;
  lines[0] = h.dump();
  try {
    parse_log(join_lines(lines));
    FAIL("expected SchemaMismatch");
  } catch (const SchemaMismatch& e) {
    CHECK(e.found == 2);
    CHECK(e.expected == 1);
    const std::string msg = e.what();
    CHECK(msg.find('2') != std::string::npos);
    CHECK(msg.find('1') != std::string::npos);
  }
}

TEST_CASE("unknown fields are rejected") {
  auto lines = lines_of(to_jsonl(sample_log()));
  json e = json::parse(lines[2]);
  e["extra"] = 1;
  lines[2] = e.dump();
  CHECK_THROWS_AS(parse_log(join_lines(lines)), CorruptLog);
}

TEST_CASE("tampering is caught at the tampered turn") {
  const GameLog log = sample_log(9);
  auto lines = lines_of(to_jsonl(log));
  int tampered_turn = -1;
  for (std::size_t i = 1; i + 2 < lines.size() && tampered_turn < 0; ++i) {
    json e = json::parse(lines[i]);
    if (e["kind"] != "suggestion" || e["shown_card"].is_null()) continue;
    const int disprover = e["disprover"].get<int>();
    // Swap in some other card from the disprover's hand.
    const CardSet hand = log.hands[static_cast<std::size_t>(disprover)].cards;
    const Card shown = card_named(e["shown_card"].get<std::string>());
    for (Card c : hand) {
      if (c != shown) {
        e["shown_card"] = std::string(c.name());
        break;
      }
    }
    lines[i] = e.dump();
    tampered_turn = e["turn_index"].get<int>();
  }
  REQUIRE(tampered_turn > 0);
  const GameLog bad = parse_log(join_lines(lines));
  try {
    replay(bad);
    FAIL("expected ReplayDivergence");
  } catch (const ReplayDivergence& d) {
    CHECK(d.turn_index == tampered_turn);
    CHECK(d.field == "shown_card");
  }
}

TEST_CASE("sealed deal tampering is caught") {
  GameLog log = sample_log(10);
  std::swap(log.hands[0], log.hands[1]);
  std::swap(log.hands[0].owner, log.hands[1].owner);
  CHECK_THROWS_AS(replay(log), ReplayDivergence);
}

TEST_CASE("model-backed seats replay from their recorded attempts") {
  GameConfig cfg = config_of(3, 17);
  cfg.round_limit = 3;
  cfg.agents[1] = AgentSpec{AgentKind::Llm, "scripted", "mock", 0.7, "", ""};
  int calls = 0;
  Gateway gw(std::make_shared<CallbackBackend>([&](const CompletionRequest& r) -> std::string {
    ++calls;
    if (calls % 4 == 0) return "nonsense";
    if (r.user_text.rfind("DEDUCTION PHASE", 0) == 0) return "ANALYSIS: a\nDEDUCED_CARDS: NONE";
    if (r.user_text.rfind("Another player (", 0) == 0) {
      const auto at = r.user_text.find("can disprove this suggestion: ") + 30;
      const auto end = r.user_text.find_first_of(",\n", at);
      return "REASONING: r\nSHOW: " + r.user_text.substr(at, end - at);
    }
    return "SUMMARY: s\nREASONING: r\nSUGGESTION: Mrs. White, Rope, Kitchen\nACCUSATION: NONE";
  }));
  GatewayLog glog;
  AgentFactoryContext ctx;
  ctx.game_seed = cfg.seed;
  ctx.gateways["mock"] = &gw;
  ctx.gateway_log = &glog;
  std::vector<std::unique_ptr<Agent>> agents;
  for (PlayerId p = 0; p < 3; ++p) agents.push_back(make_agent(cfg.agents[static_cast<std::size_t>(p)], p, ctx));
  const GameLog log = make_log(cfg, run_game(cfg, agents));
  CHECK(calls > 0);
  CHECK(glog.size() == static_cast<std::size_t>(calls));
  const GameLog back = parse_log(to_jsonl(log));
  CHECK(replay(back).events == log.events);

  // Editing a recorded answer breaks the replay.
  GameLog cut = back;
  for (GameEvent& e : cut.events) {
    if (auto* d = std::get_if<DeductionRecorded>(&e.payload); d && d->player == 1) {
      d->decision.attempts.back().text = "ANALYSIS: a\nDEDUCED_CARDS: Rope";
      break;
    }
  }
  CHECK_THROWS_AS(replay(cut), ReplayDivergence);

  const GatewayLog parsed = parse_gateway_log(gateway_to_jsonl(glog));
  CHECK(parsed == glog);
}
