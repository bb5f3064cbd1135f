#include "clue/game_log.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace clue {

using nlohmann::json;

namespace {

// Rejects fields this schema version does not know.
void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw Error(std::string(what) + " must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw Error("unknown field '" + item.key() + "' in " + what);
  }
}

json card_json(Card c) { return std::string(c.name()); }
Card card_from(const json& j) { return card_named(j.get<std::string>()); }

json cards_json(CardSet s) {
  json out = json::array();
  for (Card c : s) out.push_back(card_json(c));
  return out;
}

CardSet cards_from(const json& j) {
  CardSet out;
  for (const json& c : j) out.insert(card_from(c));
  return out;
}

json triple_json(const Triple& t) { return json::array({card_json(t.suspect), card_json(t.weapon), card_json(t.room)}); }

Triple triple_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error("a triple must be an array of three cards");
  const Triple t{card_from(j[0]), card_from(j[1]), card_from(j[2])};
  if (!t.valid()) throw Error("triple is not one suspect, one weapon and one room");
  return t;
}

template <class T, class F>
json opt_json(const std::optional<T>& v, F f) {
  return v ? f(*v) : json(nullptr);
}

std::optional<PlayerId> opt_player(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<PlayerId>();
}

json players_json(const std::vector<PlayerId>& ps) {
  json out = json::array();
  for (PlayerId p : ps) out.push_back(p);
  return out;
}

json parsed_json(const Parsed& p) {
  if (const auto* d = std::get_if<DeductionClaim>(&p)) {
    return {{"kind", "deduction"}, {"analysis", d->analysis}, {"cards", cards_json(d->cards)}};
  }
  if (const auto* m = std::get_if<Move>(&p)) {
    return {{"kind", "move"},
            {"summary", m->summary},
            {"reasoning", m->reasoning},
            {"suggestion", triple_json(m->suggestion)},
            {"accusation", opt_json(m->accusation, triple_json)}};
  }
  if (const auto* s = std::get_if<Show>(&p)) {
    return {{"kind", "show"}, {"reasoning", s->reasoning}, {"card", card_json(s->card)}};
  }
  return nullptr;
}

Parsed parsed_from(const json& j) {
  if (j.is_null()) return std::monostate{};
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "deduction") {
    check_keys(j, {"kind", "analysis", "cards"}, "deduction payload");
    return DeductionClaim{j.at("analysis").get<std::string>(), cards_from(j.at("cards"))};
  }
  if (kind == "move") {
    check_keys(j, {"kind", "summary", "reasoning", "suggestion", "accusation"}, "move payload");
    Move m;
    m.summary = j.at("summary").get<std::string>();
    m.reasoning = j.at("reasoning").get<std::string>();
    m.suggestion = triple_from(j.at("suggestion"));
    if (!j.at("accusation").is_null()) m.accusation = triple_from(j.at("accusation"));
    return m;
  }
  if (kind == "show") {
    check_keys(j, {"kind", "reasoning", "card"}, "show payload");
    return Show{j.at("reasoning").get<std::string>(), card_from(j.at("card"))};
  }
  throw Error("unknown payload kind '" + kind + "'");
}

json opt_decision(const std::optional<AgentDecision>& d) {
  return d ? decision_to_json(*d) : json(nullptr);
}

json standing_json(const PlayerStanding& s) {
  return {{"player", s.player},
          {"accusation", opt_json(s.accusation, triple_json)},
          {"accuracy", s.accuracy},
          {"accusation_round", s.accusation_round},
          {"correct", s.correct},
          {"eliminated", s.eliminated},
          {"rank", s.rank}};
}

PlayerStanding standing_from(const json& j) {
  check_keys(j, {"player", "accusation", "accuracy", "accusation_round", "correct", "eliminated", "rank"},
             "player standing");
  PlayerStanding s;
  s.player = j.at("player").get<PlayerId>();
  if (!j.at("accusation").is_null()) s.accusation = triple_from(j.at("accusation"));
  s.accuracy = j.at("accuracy").get<int>();
  s.accusation_round = j.at("accusation_round").get<int>();
  s.correct = j.at("correct").get<bool>();
  s.eliminated = j.at("eliminated").get<bool>();
  s.rank = j.at("rank").get<int>();
  return s;
}

json header_json(const LogHeader& h) {
  return {{"type", "header"},
          {"schema_version", h.schema_version},
          {"roster_version", h.roster_version},
          {"tournament_id", h.tournament_id},
          {"game_index", h.game_index},
          {"config", config_to_json(h.config)},
          {"names", h.names},
          {"labels", h.labels},
          {"hand_sizes", h.hand_sizes}};
}

LogHeader header_from(const json& j) {
  LogHeader h;
  h.schema_version = j.at("schema_version").get<int>();
  if (h.schema_version != kSchemaVersion) throw SchemaMismatch(h.schema_version, kSchemaVersion);
  check_keys(j, {"type", "schema_version", "roster_version", "tournament_id", "game_index", "config", "names",
                 "labels", "hand_sizes"},
             "header");
  h.roster_version = j.at("roster_version").get<int>();
  if (h.roster_version != kRosterVersion) {
    throw Error("card roster version " + std::to_string(h.roster_version) + " is not supported (expected " +
                std::to_string(kRosterVersion) + ")");
  }
  h.tournament_id = j.at("tournament_id").get<std::string>();
  h.game_index = j.at("game_index").get<int>();
  h.config = config_from_json(j.at("config"));
  h.names = j.at("names").get<std::vector<std::string>>();
  h.labels = j.at("labels").get<std::vector<std::string>>();
  h.hand_sizes = j.at("hand_sizes").get<std::vector<int>>();
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public JSON forms

json agent_spec_to_json(const AgentSpec& a) {
  json j = {{"kind", agent_kind_name(a.kind)}, {"name", a.display_name}, {"label", a.label}};
  if (a.kind == AgentKind::Llm) {
    j["model_id"] = a.model_id;
    j["provider"] = a.provider;
    j["temperature"] = a.temperature;
  }
  return j;
}

AgentSpec agent_spec_from_json(const json& j) {
  check_keys(j, {"kind", "name", "label", "model_id", "provider", "temperature"}, "agent");
  AgentSpec a;
  a.kind = parse_agent_kind(j.at("kind").get<std::string>());
  a.display_name = j.value("name", "");
  a.label = j.value("label", "");
  a.model_id = j.value("model_id", "");
  a.provider = j.value("provider", a.kind == AgentKind::Llm ? "mock" : "");
  a.temperature = j.value("temperature", 0.7);
  return a;
}

json config_to_json(const GameConfig& c) {
  json agents = json::array();
  for (const AgentSpec& a : c.agents) agents.push_back(agent_spec_to_json(a));
  return {{"seed", c.seed},
          {"num_players", c.num_players},
          {"round_limit", c.round_limit},
          {"starting_seat", c.starting_seat},
          {"deck", {{"suspects", c.deck.suspects}, {"weapons", c.deck.weapons}, {"rooms", c.deck.rooms}}},
          {"agents", agents}};
}

GameConfig config_from_json(const json& j) {
  check_keys(j, {"seed", "num_players", "round_limit", "starting_seat", "deck", "agents"}, "config");
  GameConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.num_players = j.at("num_players").get<int>();
  c.round_limit = j.at("round_limit").get<int>();
  c.starting_seat = j.at("starting_seat").get<int>();
  const json& d = j.at("deck");
  check_keys(d, {"suspects", "weapons", "rooms"}, "deck");
  c.deck = DeckShape{d.at("suspects").get<int>(), d.at("weapons").get<int>(), d.at("rooms").get<int>()};
  for (const json& a : j.at("agents")) c.agents.push_back(agent_spec_from_json(a));
  return c;
}

json decision_to_json(const AgentDecision& d) {
  json attempts = json::array();
  for (const Attempt& a : d.attempts) {
    attempts.push_back({{"text", a.text}, {"error", a.error}, {"parse_error", a.parse_error}});
  }
  return {{"phase", phase_name(d.phase)},
          {"attempts", attempts},
          {"parsed", parsed_json(d.parsed)},
          {"fell_back", d.fell_back}};
}

AgentDecision decision_from_json(const json& j) {
  check_keys(j, {"phase", "attempts", "parsed", "fell_back"}, "decision");
  AgentDecision d;
  d.phase = parse_phase(j.at("phase").get<std::string>());
  for (const json& a : j.at("attempts")) {
    check_keys(a, {"text", "error", "parse_error"}, "attempt");
    d.attempts.push_back(Attempt{a.at("text").get<std::string>(), a.at("error").get<std::string>(),
                                 a.at("parse_error").get<std::string>()});
  }
  d.parsed = parsed_from(j.at("parsed"));
  d.fell_back = j.at("fell_back").get<bool>();
  if (d.attempts.empty() || d.attempt_count() > kMaxAttempts) throw Error("decision must have 1-3 attempts");
  if (d.fell_back && d.attempt_count() != kMaxAttempts) throw Error("fallback decision must have 3 attempts");
  if (d.fell_back != std::holds_alternative<std::monostate>(d.parsed)) {
    throw Error("decision must be parsed exactly when it did not fall back");
  }
  return d;
}

json event_to_json(const GameEvent& e) {
  json j = {{"type", "event"}, {"seq", e.seq}, {"turn_index", e.turn_index}, {"round", e.round}};
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SuggestionMade>) {
          j["kind"] = "suggestion";
          j["suggestion"] = {{"suggester", p.suggestion.suggester},
                             {"cards", triple_json(p.suggestion.cards)},
                             {"round", p.suggestion.round},
                             {"turn_index", p.suggestion.turn_index}};
          j["passers"] = players_json(p.outcome.passers);
          j["disprover"] = opt_json(p.outcome.disprover, [](PlayerId q) { return json(q); });
          j["shown_card"] = opt_json(p.outcome.shown_card, card_json);
          j["act"] = decision_to_json(p.act);
          j["show"] = opt_decision(p.show);
        } else if constexpr (std::is_same_v<T, AccusationMade>) {
          j["kind"] = "accusation";
          j["accusation"] = {{"accuser", p.accusation.accuser},
                             {"cards", triple_json(p.accusation.cards)},
                             {"round", p.accusation.round},
                             {"forced", p.accusation.forced}};
          j["correct"] = p.correct;
          j["accuracy"] = p.accuracy;
          j["act"] = decision_to_json(p.act);
        } else if constexpr (std::is_same_v<T, PlayerEliminated>) {
          j["kind"] = "elimination";
          j["player"] = p.player;
        } else if constexpr (std::is_same_v<T, DeductionRecorded>) {
          j["kind"] = "deduction";
          j["player"] = p.player;
          j["claimed"] = cards_json(p.claimed);
          j["correct"] = cards_json(p.correct);
          j["incorrect"] = cards_json(p.incorrect);
          j["filtered"] = cards_json(p.filtered);
          j["decision"] = decision_to_json(p.decision);
        } else if constexpr (std::is_same_v<T, FallbackTriggered>) {
          j["kind"] = "fallback";
          j["player"] = p.player;
          j["phase"] = phase_name(p.phase);
        } else if constexpr (std::is_same_v<T, GameEnded>) {
          j["kind"] = "game_end";
          j["winner"] = opt_json(p.winner, [](PlayerId q) { return json(q); });
        }
      },
      e.payload);
  return j;
}

GameEvent event_from_json(const json& j) {
  GameEvent e;
  e.seq = j.at("seq").get<int>();
  e.turn_index = j.at("turn_index").get<int>();
  e.round = j.at("round").get<int>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "suggestion") {
    check_keys(j, {"type", "seq", "turn_index", "round", "kind", "suggestion", "passers", "disprover", "shown_card",
                   "act", "show"},
               "suggestion event");
    SuggestionMade s;
    const json& sj = j.at("suggestion");
    check_keys(sj, {"suggester", "cards", "round", "turn_index"}, "suggestion");
    s.suggestion = Suggestion{sj.at("suggester").get<PlayerId>(), triple_from(sj.at("cards")),
                              sj.at("round").get<int>(), sj.at("turn_index").get<int>()};
    s.outcome.passers = j.at("passers").get<std::vector<PlayerId>>();
    s.outcome.disprover = opt_player(j.at("disprover"));
    if (!j.at("shown_card").is_null()) s.outcome.shown_card = card_from(j.at("shown_card"));
    s.act = decision_from_json(j.at("act"));
    if (!j.at("show").is_null()) s.show = decision_from_json(j.at("show"));
    e.payload = std::move(s);
  } else if (kind == "accusation") {
    check_keys(j, {"type", "seq", "turn_index", "round", "kind", "accusation", "correct", "accuracy", "act"},
               "accusation event");
    AccusationMade a;
    const json& aj = j.at("accusation");
    check_keys(aj, {"accuser", "cards", "round", "forced"}, "accusation");
    a.accusation = Accusation{aj.at("accuser").get<PlayerId>(), triple_from(aj.at("cards")),
                              aj.at("round").get<int>(), aj.at("forced").get<bool>()};
    a.correct = j.at("correct").get<bool>();
    a.accuracy = j.at("accuracy").get<int>();
    a.act = decision_from_json(j.at("act"));
    e.payload = std::move(a);
  } else if (kind == "elimination") {
    check_keys(j, {"type", "seq", "turn_index", "round", "kind", "player"}, "elimination event");
    e.payload = PlayerEliminated{j.at("player").get<PlayerId>()};
  } else if (kind == "deduction") {
    check_keys(j, {"type", "seq", "turn_index", "round", "kind", "player", "claimed", "correct", "incorrect",
                   "filtered", "decision"},
               "deduction event");
    DeductionRecorded d;
    d.player = j.at("player").get<PlayerId>();
    d.claimed = cards_from(j.at("claimed"));
    d.correct = cards_from(j.at("correct"));
    d.incorrect = cards_from(j.at("incorrect"));
    d.filtered = cards_from(j.at("filtered"));
    d.decision = decision_from_json(j.at("decision"));
    e.payload = std::move(d);
  } else if (kind == "fallback") {
    check_keys(j, {"type", "seq", "turn_index", "round", "kind", "player", "phase"}, "fallback event");
    e.payload = FallbackTriggered{j.at("player").get<PlayerId>(), parse_phase(j.at("phase").get<std::string>())};
  } else if (kind == "game_end") {
    check_keys(j, {"type", "seq", "turn_index", "round", "kind", "winner"}, "game_end event");
    e.payload = GameEnded{opt_player(j.at("winner"))};
  } else {
    throw Error("unknown event kind '" + kind + "'");
  }
  return e;
}

// ---------------------------------------------------------------------------
// Whole logs

GameResult GameLog::result() const {
  GameResult r;
  r.winner = winner;
  r.players = players;
  r.events = events;
  r.rounds_played = rounds_played;
  r.solution = solution;
  r.hands = hands;
  return r;
}

GameLog make_log(const GameConfig& config, const GameResult& result, const std::string& tournament_id,
                 int game_index) {
  GameLog log;
  log.header.tournament_id = tournament_id;
  log.header.game_index = game_index;
  log.header.config = config;
  for (PlayerId p = 0; p < config.num_players; ++p) {
    log.header.names.push_back(config.player_name(p));
    const auto idx = static_cast<std::size_t>(p);
    log.header.labels.push_back(idx < config.agents.size() ? config.agents[idx].report_label() : "");
  }
  for (const Hand& h : result.hands) log.header.hand_sizes.push_back(h.cards.size());
  log.events = result.events;
  log.winner = result.winner;
  log.rounds_played = result.rounds_played;
  log.players = result.players;
  log.solution = result.solution;
  log.hands = result.hands;
  return log;
}

std::string to_jsonl(const GameLog& log) {
  std::string out = header_json(log.header).dump() + "\n";
  for (const GameEvent& e : log.events) out += event_to_json(e).dump() + "\n";
  json players = json::array();
  for (const PlayerStanding& s : log.players) players.push_back(standing_json(s));
  out += json{{"type", "result"},
              {"winner", opt_json(log.winner, [](PlayerId q) { return json(q); })},
              {"rounds_played", log.rounds_played},
              {"players", players}}
             .dump() +
         "\n";
  json hands = json::array();
  for (const Hand& h : log.hands) hands.push_back(cards_json(h.cards));
  out += json{{"type", "sealed"}, {"solution", triple_json(log.solution)}, {"hands", hands}}.dump() + "\n";
  return out;
}

GameLog parse_log(const std::string& text) {
  GameLog log;
  enum class Stage { Header, Events, Sealed, Done } stage = Stage::Header;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) throw CorruptLog(start, "record is not terminated by a newline");
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw CorruptLog(start + (e.byte > 0 ? e.byte - 1 : 0), "invalid JSON");
    }
    try {
      if (!j.is_object() || !j.contains("type")) throw Error("record has no type");
      const std::string type = j.at("type").get<std::string>();
      if (stage == Stage::Header) {
        if (type != "header") throw Error("log must start with a header record");
        log.header = header_from(j);
        stage = Stage::Events;
      } else if (stage == Stage::Events && type == "event") {
        GameEvent e = event_from_json(j);
        if (e.seq != static_cast<int>(log.events.size())) throw Error("event sequence has a gap");
        if (!log.events.empty() && e.turn_index < log.events.back().turn_index) {
          throw Error("turn index goes backwards");
        }
        log.events.push_back(std::move(e));
      } else if (stage == Stage::Events && type == "result") {
        check_keys(j, {"type", "winner", "rounds_played", "players"}, "result");
        log.winner = opt_player(j.at("winner"));
        log.rounds_played = j.at("rounds_played").get<int>();
        for (const json& s : j.at("players")) log.players.push_back(standing_from(s));
        stage = Stage::Sealed;
      } else if (stage == Stage::Sealed && type == "sealed") {
        check_keys(j, {"type", "solution", "hands"}, "sealed");
        log.solution = triple_from(j.at("solution"));
        PlayerId p = 0;
        for (const json& h : j.at("hands")) log.hands.push_back(Hand{p++, cards_from(h)});
        stage = Stage::Done;
      } else {
        throw Error("unexpected '" + type + "' record");
      }
    } catch (const SchemaMismatch&) {
      throw;
    } catch (const CorruptLog&) {
      throw;
    } catch (const std::exception& e) {
      throw CorruptLog(start, e.what());
    }
  }
  if (stage != Stage::Done) throw CorruptLog(text.size(), "log ends before the sealed record");
  return log;
}

void write_log(const std::filesystem::path& path, const GameLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_jsonl(log);
}

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

GameLog read_log(const std::filesystem::path& path) { return parse_log(slurp(path)); }

std::string gateway_to_jsonl(const GatewayLog& records) {
  std::string out;
  for (const GatewayRecord& r : records) {
    out += json{{"request_digest", r.request_digest},
                {"model_id", r.model_id},
                {"response", r.response},
                {"latency_ms", r.latency_ms},
                {"retry", r.retry},
                {"error", gateway_error_name(r.error)},
                {"status", r.status},
                {"detail", r.detail}}
               .dump() +
           "\n";
  }
  return out;
}

GatewayLog parse_gateway_log(const std::string& text) {
  GatewayLog out;
  std::istringstream in(text);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    try {
      const json j = json::parse(line);
      check_keys(j, {"request_digest", "model_id", "response", "latency_ms", "retry", "error", "status", "detail"},
                 "gateway record");
      GatewayRecord r;
      r.request_digest = j.at("request_digest").get<std::string>();
      r.model_id = j.at("model_id").get<std::string>();
      r.response = j.at("response").get<std::string>();
      r.latency_ms = j.at("latency_ms").get<double>();
      r.retry = j.at("retry").get<int>();
      r.error = parse_gateway_error(j.at("error").get<std::string>());
      r.status = j.at("status").get<int>();
      r.detail = j.at("detail").get<std::string>();
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw CorruptLog(offset, e.what());
    }
    offset += line.size() + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Replay

namespace {

// Dotted path of the first difference between two JSON values ("" if equal).
std::string first_difference(const json& a, const json& b, const std::string& path) {
  if (a == b) return "";
  if (a.is_object() && b.is_object()) {
    std::set<std::string> keys;
    for (const auto& item : a.items()) keys.insert(item.key());
    for (const auto& item : b.items()) keys.insert(item.key());
    for (const std::string& k : keys) {
      const std::string sub = path.empty() ? k : path + "." + k;
      if (!a.contains(k) || !b.contains(k)) return sub;
      const std::string d = first_difference(a.at(k), b.at(k), sub);
      if (!d.empty()) return d;
    }
  }
  if (a.is_array() && b.is_array() && a.size() == b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string d = first_difference(a[i], b[i], path + "[" + std::to_string(i) + "]");
      if (!d.empty()) return d;
    }
  }
  return path.empty() ? "<record>" : path;
}

void queue_decision(std::vector<RecordedSource*>& sources, PlayerId p, const AgentDecision& d) {
  const auto idx = static_cast<std::size_t>(p);
  if (idx >= sources.size()) throw ReplayDivergence(0, "player");
  if (!sources[idx]) return;
  for (const Attempt& a : d.attempts) sources[idx]->push(d.phase, a);
}

}  // namespace

GameResult replay(const GameLog& log, const ReplayOptions& options) {
  const GameConfig& config = log.header.config;
  if (static_cast<int>(config.agents.size()) != config.num_players) {
    throw CorruptLog(0, "header does not describe every seat");
  }
  std::vector<std::unique_ptr<Agent>> agents;
  std::vector<RecordedSource*> sources(static_cast<std::size_t>(config.num_players), nullptr);
  AgentFactoryContext ctx;
  ctx.game_seed = config.seed;
  ctx.oracle = options.oracle;
  for (PlayerId p = 0; p < config.num_players; ++p) {
    const AgentSpec& spec = config.agents[static_cast<std::size_t>(p)];
    if (spec.kind == AgentKind::Llm) {
      auto src = std::make_unique<RecordedSource>();
      sources[static_cast<std::size_t>(p)] = src.get();
      agents.push_back(std::make_unique<ProtocolAgent>(std::move(src)));
    } else {
      agents.push_back(make_agent(spec, p, ctx));
    }
  }
  for (const GameEvent& e : log.events) {
    if (const auto* d = std::get_if<DeductionRecorded>(&e.payload)) {
      queue_decision(sources, d->player, d->decision);
    } else if (const auto* s = std::get_if<SuggestionMade>(&e.payload)) {
      queue_decision(sources, s->suggestion.suggester, s->act);
      if (s->show && s->outcome.disprover) queue_decision(sources, *s->outcome.disprover, *s->show);
    } else if (const auto* a = std::get_if<AccusationMade>(&e.payload)) {
      queue_decision(sources, a->accusation.accuser, a->act);
    }
  }

  EngineHooks hooks;
  hooks.on_event = [&](const GameState&, const GameEvent& e) {
    const auto idx = static_cast<std::size_t>(e.seq);
    if (idx >= log.events.size()) throw ReplayDivergence(e.turn_index, "events");
    const std::string diff = first_difference(event_to_json(log.events[idx]), event_to_json(e), "");
    if (!diff.empty()) throw ReplayDivergence(e.turn_index, diff);
  };
  GameResult result;
  try {
    result = run_game(config, agents, hooks);
  } catch (const ReplayDivergence&) {
    throw;
  } catch (const std::exception& ex) {
    // A recorded queue ran dry or a contract check fired: the log does not
    // match what the engine asks for.
    int turn = 0;
    for (const GameEvent& e : log.events) turn = std::max(turn, e.turn_index);
    throw ReplayDivergence(turn, std::string("engine: ") + ex.what());
  }
  const int last_turn = result.events.empty() ? 0 : result.events.back().turn_index;
  if (result.events.size() != log.events.size()) throw ReplayDivergence(last_turn, "events");
  for (RecordedSource* src : sources) {
    if (src && !src->exhausted()) throw ReplayDivergence(last_turn, "unused recorded responses");
  }
  const GameLog regenerated = make_log(config, result, log.header.tournament_id, log.header.game_index);
  if (regenerated.header != log.header) throw ReplayDivergence(0, "header");
  if (regenerated.winner != log.winner) throw ReplayDivergence(last_turn, "winner");
  if (regenerated.rounds_played != log.rounds_played) throw ReplayDivergence(last_turn, "rounds_played");
  if (regenerated.players != log.players) throw ReplayDivergence(last_turn, "players");
  if (regenerated.solution != log.solution || regenerated.hands != log.hands) {
    throw ReplayDivergence(0, "sealed");
  }
  return result;
}

}  // namespace clue
