#include "clue/tournament.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

namespace clue {

using nlohmann::json;

void TournamentSpec::validate() const {
  if (games < 1) throw InvalidConfig("games must be at least 1");
  if (tournament_id.empty() || tournament_id.find_first_of("/\\") != std::string::npos) {
    throw InvalidConfig("tournament_id must be a non-empty plain directory name");
  }
  if (base.agents.empty()) throw InvalidConfig("the roster is empty");
  if (has_llm() && !seed) throw InvalidConfig("rosters with model-backed agents need an explicit seed");
  if (gateway.max_concurrent < 1 || gateway.timeout_ms < 1 || gateway.max_tokens < 1 || gateway.retries < 1) {
    throw InvalidConfig("gateway settings must be positive");
  }
  base.validate();
}

bool TournamentSpec::has_llm() const {
  return std::any_of(base.agents.begin(), base.agents.end(),
                     [](const AgentSpec& a) { return a.kind == AgentKind::Llm; });
}

GameConfig TournamentSpec::game_config(int k) const {
  GameConfig c = base;
  c.seed = derive_seed(seed.value_or(0), "game/" + std::to_string(k));
  if (rotation) c.starting_seat = (base.starting_seat + k) % base.num_players;
  return c;
}

TournamentSpec TournamentSpec::parse(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("spec is not valid JSON: ") + e.what());
  }
  TournamentSpec s;
  try {
    if (!j.is_object()) throw InvalidConfig("spec must be a JSON object");
    for (const auto& item : j.items()) {
      static const char* known[] = {"tournament_id", "games", "rotation", "seed", "round_limit",
                                    "starting_seat", "num_players", "deck", "agents", "gateway"};
      if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return item.key() == k; }) ==
          std::end(known)) {
        throw InvalidConfig("unknown spec field '" + item.key() + "'");
      }
    }
    s.tournament_id = j.value("tournament_id", s.tournament_id);
    s.games = j.value("games", 1);
    s.rotation = j.value("rotation", true);
    if (j.contains("seed") && !j.at("seed").is_null()) s.seed = j.at("seed").get<std::uint64_t>();
    s.base.round_limit = j.value("round_limit", 30);
    s.base.starting_seat = j.value("starting_seat", 0);
    if (j.contains("deck")) {
      const json& d = j.at("deck");
      s.base.deck = DeckShape{d.value("suspects", 6), d.value("weapons", 6), d.value("rooms", 9)};
    }
    for (const json& a : j.at("agents")) s.base.agents.push_back(agent_spec_from_json(a));
    s.base.num_players = j.value("num_players", static_cast<int>(s.base.agents.size()));
    if (j.contains("gateway")) {
      const json& g = j.at("gateway");
      for (const auto& item : g.items()) {
        if (item.key() != "max_concurrent" && item.key() != "timeout_ms" && item.key() != "max_tokens" &&
            item.key() != "retries") {
          throw InvalidConfig("unknown gateway field '" + item.key() + "'");
        }
      }
      s.gateway.max_concurrent = g.value("max_concurrent", s.gateway.max_concurrent);
      s.gateway.timeout_ms = g.value("timeout_ms", s.gateway.timeout_ms);
      s.gateway.max_tokens = g.value("max_tokens", s.gateway.max_tokens);
      s.gateway.retries = g.value("retries", s.gateway.retries);
    }
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("malformed spec: ") + e.what());
  } catch (const InvalidConfig&) {
    throw;
  } catch (const Error& e) {
    throw InvalidConfig(e.what());
  }
  s.validate();
  return s;
}

TournamentSpec TournamentSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidConfig("cannot read spec " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string TournamentSpec::dump() const {
  json agents = json::array();
  for (const AgentSpec& a : base.agents) agents.push_back(agent_spec_to_json(a));
  json j = {{"tournament_id", tournament_id},
            {"games", games},
            {"rotation", rotation},
            {"seed", seed ? json(*seed) : json(nullptr)},
            {"round_limit", base.round_limit},
            {"starting_seat", base.starting_seat},
            {"num_players", base.num_players},
            {"deck", {{"suspects", base.deck.suspects}, {"weapons", base.deck.weapons}, {"rooms", base.deck.rooms}}},
            {"agents", agents},
            {"gateway",
             {{"max_concurrent", gateway.max_concurrent},
              {"timeout_ms", gateway.timeout_ms},
              {"max_tokens", gateway.max_tokens},
              {"retries", gateway.retries}}}};
  return j.dump(2) + "\n";
}

std::vector<GameLog> TournamentRun::logs() const {
  std::vector<GameLog> out;
  for (const GameRun& g : games) out.push_back(g.log);
  return out;
}

MockFixture TournamentRun::fixture() const {
  MockFixture f;
  for (const GameRun& g : games) f.games.push_back(MockFixture::from_records(g.gateway));
  return f;
}

namespace {

GatewayOptions gateway_options(const TournamentSpec& spec, const TournamentOptions& options) {
  GatewayOptions o;
  o.max_concurrent = spec.gateway.max_concurrent;
  o.retry.max_attempts = spec.gateway.retries;
  o.sleeper = options.sleeper;
  return o;
}

}  // namespace

TournamentRun run_tournament(const TournamentSpec& spec, const TournamentOptions& options) {
  spec.validate();
  if (options.parallel < 1) throw InvalidConfig("parallel must be at least 1");
  const GatewayOptions gw_opts = gateway_options(spec, options);

  std::set<std::string> providers;
  for (const AgentSpec& a : spec.base.agents) {
    if (a.kind == AgentKind::Llm) providers.insert(a.provider);
  }

  // Shared gateways: one per live provider, or one for an override backend
  // or a shared transcript. Per-game transcripts get their own gateway.
  std::map<std::string, std::shared_ptr<Gateway>> shared;
  bool per_game_mock = false;
  int parallel = options.parallel;
  if (!providers.empty()) {
    if (options.backend) {
      auto gw = std::make_shared<Gateway>(options.backend, gw_opts);
      for (const auto& p : providers) shared[p] = gw;
    } else if (options.mock) {
      if (options.mock->shared) {
        auto gw = std::make_shared<Gateway>(std::make_shared<MockBackend>(options.mock->games.at(0)), gw_opts);
        for (const auto& p : providers) shared[p] = gw;
        parallel = 1;  // one ordered transcript
      } else {
        per_game_mock = true;
      }
    } else {
      for (const auto& p : providers) {
        if (p == "mock") throw InvalidConfig("provider 'mock' needs a --mock transcript");
        shared[p] = std::make_shared<Gateway>(make_provider_backend(p), gw_opts);
      }
    }
  }

  TournamentRun run;
  run.spec = spec;
  run.games.resize(static_cast<std::size_t>(spec.games));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(spec.games));

  auto play = [&](int k) {
    const GameConfig cfg = spec.game_config(k);
    GameRun& out = run.games[static_cast<std::size_t>(k)];
    std::shared_ptr<Gateway> own;
    AgentFactoryContext ctx;
    ctx.game_seed = cfg.seed;
    ctx.gateway_log = &out.gateway;
    ctx.templates = options.templates;
    ctx.oracle = options.oracle;
    ctx.max_tokens = spec.gateway.max_tokens;
    ctx.timeout = std::chrono::milliseconds(spec.gateway.timeout_ms);
    if (per_game_mock) {
      if (static_cast<std::size_t>(k) >= options.mock->games.size()) {
        throw FixtureMismatch("mock fixture has no transcript for game " + std::to_string(k));
      }
      own = std::make_shared<Gateway>(std::make_shared<MockBackend>(options.mock->games[static_cast<std::size_t>(k)]),
                                      gw_opts);
      for (const auto& p : providers) ctx.gateways[p] = own.get();
    } else {
      for (const auto& [p, gw] : shared) ctx.gateways[p] = gw.get();
    }
    std::vector<std::unique_ptr<Agent>> agents;
    for (PlayerId p = 0; p < cfg.num_players; ++p) {
      agents.push_back(make_agent(cfg.agents[static_cast<std::size_t>(p)], p, ctx));
    }
    const GameResult result = run_game(cfg, agents);
    out.log = make_log(cfg, result, spec.tournament_id, k);
    if (per_game_mock) {
      auto* mock = dynamic_cast<MockBackend*>(&own->backend());
      if (mock && mock->remaining() != 0) {
        throw FixtureMismatch("game " + std::to_string(k) + " left " + std::to_string(mock->remaining()) +
                              " scripted responses unused");
      }
    }
  };

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < spec.games; k = next++) {
      try {
        play(k);
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
  };
  const int threads = std::min(parallel, spec.games);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  run.report = build_report(run.logs());
  return run;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::filesystem::path write_tournament(const TournamentRun& run, const std::filesystem::path& out_dir) {
  const auto dir = out_dir / run.spec.tournament_id;
  std::filesystem::create_directories(dir);
  bool any_calls = false;
  for (std::size_t k = 0; k < run.games.size(); ++k) {
    write_log(dir / ("game_" + std::to_string(k) + ".jsonl"), run.games[k].log);
    write_file(dir / ("gateway_" + std::to_string(k) + ".jsonl"), gateway_to_jsonl(run.games[k].gateway));
    any_calls = any_calls || !run.games[k].gateway.empty();
  }
  write_file(dir / "summary.csv", run.report.summary_csv());
  write_file(dir / "heatmap.csv", run.report.heatmap_csv());
  write_file(dir / "knowledge.csv", run.report.knowledge_csv());
  if (any_calls) write_file(dir / "mock_fixture.json", run.fixture().dump() + "\n");
  return dir;
}

std::vector<GameLog> read_logs(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(dir.string() + " is not a directory");
  static const std::regex name_re(R"(game_(\d+)\.jsonl)");
  std::vector<std::pair<long, std::filesystem::path>> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, name_re)) files.emplace_back(std::stol(m[1].str()), entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no game_<k>.jsonl logs in " + dir.string());
  std::vector<GameLog> out;
  for (const auto& [k, path] : files) out.push_back(read_log(path));
  return out;
}

}  // namespace clue
