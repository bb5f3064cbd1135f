#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clue/agents.hpp"
#include "clue/engine.hpp"
#include "clue/game_log.hpp"
#include "clue/response_parser.hpp"
#include "clue/tournament.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const json& v : j) out.append(to_py(v));
      return std::move(out);
    }
    default: {
      py::dict out;
      for (const auto& item : j.items()) out[py::str(item.key())] = to_py(item.value());
      return std::move(out);
    }
  }
}

py::dict report_dict(const clue::TournamentReport& r) {
  py::dict d;
  d["summary_csv"] = r.summary_csv();
  d["heatmap_csv"] = r.heatmap_csv();
  d["knowledge_csv"] = r.knowledge_csv();
  d["table"] = r.table();
  return d;
}

std::vector<clue::GameLog> parse_logs(const std::vector<std::string>& texts) {
  std::vector<clue::GameLog> logs;
  for (const auto& t : texts) logs.push_back(clue::parse_log(t));
  return logs;
}

clue::Location location_from(int holder) { return clue::Location{holder}; }

}  // namespace

PYBIND11_MODULE(cluesim, m) {
  m.doc() = "Clue game engine, deduction solver and tournament runner";

  auto error = py::register_exception<clue::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<clue::InvalidConfig>(m, "InvalidConfig", error);
  py::register_exception<clue::UnknownCard>(m, "UnknownCard", error);
  py::register_exception<clue::ParseError>(m, "ParseError", error);
  py::register_exception<clue::Inconsistent>(m, "Inconsistent", error);
  py::register_exception<clue::CapExceeded>(m, "CapExceeded", error);
  py::register_exception<clue::CorruptLog>(m, "CorruptLog", error);
  py::register_exception<clue::SchemaMismatch>(m, "SchemaMismatch", error);
  py::register_exception<clue::ReplayDivergence>(m, "ReplayDivergence", error);
  py::register_exception<clue::GatewayError>(m, "GatewayError", error);
  py::register_exception<clue::GatewayUnavailable>(m, "GatewayUnavailable", error);
  py::register_exception<clue::FixtureMismatch>(m, "FixtureMismatch", error);

  m.def("cards", [] {
    std::vector<std::string> out;
    for (clue::Card c : clue::full_deck()) out.emplace_back(c.name());
    return out;
  }, "The 21 roster cards in canonical order.");
  m.def("parse_card", [](const std::string& text) { return std::string(clue::parse_card(text).name()); },
        py::arg("text"), "Canonical name of a loosely written card.");

  m.def(
      "parse_response",
      [](const std::string& phase, const std::string& text) {
        const clue::Phase p = clue::parse_phase(phase);
        const auto d = clue::canonical_decision(p, clue::parse_phase_response(p, text));
        return to_py(clue::decision_to_json(d)["parsed"]);
      },
      py::arg("phase"), py::arg("text"), "Parse a deduce/act/show response; raises ParseError.");

  m.def(
      "play_game",
      [](const std::string& config_json) {
        const clue::GameConfig cfg = clue::config_from_json(json::parse(config_json));
        std::vector<std::unique_ptr<clue::Agent>> agents;
        clue::AgentFactoryContext ctx;
        ctx.game_seed = cfg.seed;
        for (clue::PlayerId p = 0; p < cfg.num_players; ++p) {
          agents.push_back(clue::make_agent(cfg.agents[static_cast<std::size_t>(p)], p, ctx));
        }
        py::gil_scoped_release unlock;
        return clue::to_jsonl(clue::make_log(cfg, clue::run_game(cfg, agents)));
      },
      py::arg("config_json"), "Play one game of oracle/random seats; returns the JSONL log.");

  m.def(
      "run_tournament",
      [](const std::string& spec_json, std::optional<std::string> mock_json, int parallel) {
        const auto spec = clue::TournamentSpec::parse(spec_json);
        clue::TournamentOptions opts;
        opts.parallel = parallel;
        if (mock_json) opts.mock = clue::MockFixture::parse(*mock_json);
        clue::TournamentRun run;
        {
          py::gil_scoped_release unlock;
          run = clue::run_tournament(spec, opts);
        }
        py::dict out = report_dict(run.report);
        py::list logs;
        for (const auto& g : run.games) logs.append(clue::to_jsonl(g.log));
        out["logs"] = logs;
        return out;
      },
      py::arg("spec_json"), py::arg("mock_json") = py::none(), py::arg("parallel") = 1,
      "Run a tournament spec; returns logs and report tables.");

  m.def(
      "replay",
      [](const std::string& log_text) {
        const clue::GameLog log = clue::parse_log(log_text);
        return static_cast<int>(clue::replay(log).events.size());
      },
      py::arg("log_text"), "Re-run a log; returns the event count or raises ReplayDivergence.");

  m.def(
      "build_report", [](const std::vector<std::string>& texts) { return report_dict(clue::build_report(parse_logs(texts))); },
      py::arg("log_texts"), "Report tables over several JSONL logs.");

  m.def(
      "knowledge_series",
      [](const std::string& log_text, int player) { return clue::knowledge_series(clue::parse_log(log_text), player); },
      py::arg("log_text"), py::arg("player"));

  py::class_<clue::KnowledgeBase>(m, "KnowledgeBase")
      .def(py::init([](int owner, std::vector<int> hand_sizes, const std::vector<std::string>& hand) {
             clue::CardSet own;
             for (const auto& c : hand) own.insert(clue::parse_card(c));
             return clue::KnowledgeBase(owner, clue::full_deck(), std::move(hand_sizes), own);
           }),
           py::arg("owner"), py::arg("hand_sizes"), py::arg("hand"),
           "Knowledge of `owner` on the full deck. Locations: player index, or -1 for the envelope.")
      .def("place", [](clue::KnowledgeBase& kb, const std::string& c, int where) {
        kb.place(clue::parse_card(c), location_from(where));
      })
      .def("exclude", [](clue::KnowledgeBase& kb, const std::string& c, int where) {
        kb.exclude(clue::parse_card(c), location_from(where));
      })
      .def("add_disjunction",
           [](clue::KnowledgeBase& kb, int player, const std::vector<std::string>& names) {
             clue::CardSet s;
             for (const auto& c : names) s.insert(clue::parse_card(c));
             kb.add_disjunction(player, s);
           })
      .def("propagate", [](const clue::KnowledgeBase& kb) { return clue::propagate(kb).kb; },
           "Copy with every cheap inference applied.")
      .def("candidates",
           [](const clue::KnowledgeBase& kb, const std::string& c) {
             std::vector<int> out;
             for (clue::Location l : kb.candidates(clue::parse_card(c))) out.push_back(l.holder);
             return out;
           })
      .def("certain_facts",
           [](const clue::KnowledgeBase& kb, std::uint64_t cap) {
             std::vector<std::pair<std::string, int>> out;
             for (const clue::Fact& f : clue::certain_facts(kb, cap)) out.emplace_back(f.card.name(), f.location.holder);
             return out;
           },
           py::arg("cap") = clue::kDefaultNodeCap)
      .def("count_worlds", [](const clue::KnowledgeBase& kb, std::uint64_t cap) { return clue::count_worlds(kb, cap); },
           py::arg("cap") = clue::kDefaultNodeCap);
}
