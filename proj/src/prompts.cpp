#include "clue/prompts.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "prompt_assets.hpp"

namespace clue {
namespace {

const std::regex& placeholder_re() {
  static const std::regex re(R"(\{([a-z_][a-z0-9_.]*)\})");
  return re;
}

std::string or_none(const std::string& s) { return s.empty() ? "(none)" : s; }

std::string names_of(CardSet cards) { return cards.empty() ? "(none)" : join_names(cards); }

std::string category_plural(Category c) {
  switch (c) {
    case Category::Suspect: return "suspects";
    case Category::Weapon: return "weapons";
    case Category::Room: return "rooms";
  }
  return "?";
}

std::string knowledge_text(const PlayerView& v) {
  std::ostringstream out;
  out << "Your hand: " << names_of(v.hand) << "\n";
  out << "Cards shown to you:";
  if (v.shown_to_me.empty()) out << " (none)";
  for (std::size_t i = 0; i < v.shown_to_me.size(); ++i) {
    const ShownToMe& s = v.shown_to_me[i];
    out << (i ? "; " : " ") << s.card.name() << " (by " << v.name(s.from) << ", T" << s.turn_index
        << ")";
  }
  out << "\nCards you correctly deduced: " << names_of(v.verified_deductions);
  return out.str();
}

std::string candidates_text(const PlayerView& v, const DerivedInfo& d) {
  std::ostringstream out;
  for (Category cat : kCategories) {
    const auto k = static_cast<std::size_t>(cat);
    out << "Remaining " << category_plural(cat) << ": " << names_of(d.remaining[k]) << "\n";
  }
  out << "Locked:";
  bool any = false;
  for (Category cat : kCategories) {
    const auto& locked = d.locked[static_cast<std::size_t>(cat)];
    if (!locked) continue;
    out << (any ? ", " : " ") << category_name(cat) << "=" << locked->name();
    any = true;
  }
  if (!any) out << " (none)";
  out << "\nUndisproved suggestions:";
  if (d.undisproved.empty()) out << " (none)";
  for (std::size_t i = 0; i < d.undisproved.size(); ++i) {
    const HistoryEntry& e = d.undisproved[i];
    out << (i ? "; " : " ") << "T" << e.turn_index << " " << v.name(e.suggester) << ": "
        << e.cards.to_string();
  }
  out << "\nDefinitive:";
  if (d.definitive.empty()) out << " (none)";
  for (std::size_t i = 0; i < d.definitive.size(); ++i) {
    const Fact& f = d.definitive[i];
    out << (i ? "; " : " ") << f.card.name()
        << (f.location.is_envelope() ? std::string(" in the envelope")
                                     : " held by " + v.name(f.location.holder));
  }
  return out.str();
}

std::string observations_text(const PromptContext& ctx) {
  const PlayerView& v = ctx.view;
  std::ostringstream out;
  out << "Cards you have shown:";
  if (v.my_shows.empty()) out << " (none)";
  for (std::size_t i = 0; i < v.my_shows.size(); ++i) {
    const ShowRecord& r = v.my_shows[i];
    out << (i ? "; " : " ") << r.card.name() << " to " << v.name(r.to) << " (T" << r.turn_index << ")";
  }
  out << "\nEliminated players:";
  bool any = false;
  for (PlayerId p = 0; p < v.num_players; ++p) {
    if (v.active[static_cast<std::size_t>(p)]) continue;
    out << (any ? ", " : " ") << v.name(p);
    any = true;
  }
  if (!any) out << " (none)";
  if (ctx.forced_final) {
    out << "\nFINAL ACCUSATION: the round limit has been reached. You must accuse now; "
           "put your answer on the ACCUSATION line.";
  }
  return out.str();
}

std::string last_suggestion_text(const PlayerView& v) {
  if (!v.last_suggestion) return "Your last suggestion: (none)";
  const Suggestion& s = *v.last_suggestion;
  std::string out = "Your last suggestion: " + s.cards.to_string();
  for (const HistoryEntry& e : v.history) {
    if (e.turn_index != s.turn_index) continue;
    if (e.disprover) {
      out += " --> disproved by " + v.name(*e.disprover);
      if (e.shown) out += " (showed you " + std::string(e.shown->name()) + ")";
    } else {
      out += " --> not disproved";
    }
  }
  return out;
}

std::string history_line(const HistoryEntry& e, const std::vector<std::string>& names,
                         std::optional<PlayerId> viewer) {
  std::ostringstream out;
  out << "T" << e.turn_index << ". " << names[static_cast<std::size_t>(e.suggester)]
      << " suggested: " << e.cards.to_string() << " --> ";
  if (e.disprover) {
    out << "disproved by " << names[static_cast<std::size_t>(*e.disprover)];
  } else {
    out << "not disproved";
  }
  if (!e.passers.empty()) {
    out << " (passed: ";
    for (std::size_t i = 0; i < e.passers.size(); ++i) {
      out << (i ? ", " : "") << names[static_cast<std::size_t>(e.passers[i])];
    }
    out << ")";
  }
  if (e.shown) {
    const bool i_showed = viewer && e.disprover && *viewer == *e.disprover;
    out << (i_showed ? " [you showed: " : " [shown to you: ") << e.shown->name() << "]";
  }
  return out.str();
}

std::string history_text(const std::vector<HistoryEntry>& history,
                         const std::vector<std::string>& names, std::optional<PlayerId> viewer) {
  if (history.empty()) return "History: (none)";
  std::string out = "History:";
  for (const HistoryEntry& e : history) out += "\n" + history_line(e, names, viewer);
  return out;
}

}  // namespace

const PromptTemplates& PromptTemplates::builtin() {
  static const PromptTemplates t = [] {
    PromptTemplates out;
    out.text_[Phase::Deduce] = detail::kDeducePrompt;
    out.text_[Phase::Act] = detail::kActPrompt;
    out.text_[Phase::ShowCard] = detail::kShowPrompt;
    return out;
  }();
  return t;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  PromptTemplates out = builtin();
  const std::pair<Phase, const char*> files[] = {
      {Phase::Deduce, "deduce.txt"}, {Phase::Act, "act.txt"}, {Phase::ShowCard, "show.txt"}};
  for (const auto& [phase, file] : files) {
    std::ifstream in(dir / file, std::ios::binary);
    if (!in) continue;
    std::ostringstream buf;
    buf << in.rdbuf();
    out.text_[phase] = buf.str();
  }
  return out;
}

const std::string& PromptTemplates::text(Phase phase) const { return text_.at(phase); }

std::vector<std::string> PromptTemplates::placeholders(const std::string& text) {
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), placeholder_re());
       it != std::sregex_iterator(); ++it) {
    out.push_back((*it)[1].str());
  }
  return out;
}

std::string PromptTemplates::render(Phase phase,
                                    const std::map<std::string, std::string>& values) const {
  const std::string& tmpl = text(phase);
  std::string out;
  auto last = tmpl.cbegin();
  for (auto it = std::sregex_iterator(tmpl.begin(), tmpl.end(), placeholder_re());
       it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    out.append(last, m[0].first);
    const auto v = values.find(m[1].str());
    if (v == values.end()) throw MissingContext(m[1].str());
    out += v->second;
    last = m[0].second;
  }
  out.append(last, tmpl.cend());
  return out;
}

std::map<std::string, std::string> prompt_values(Phase phase, const PromptContext& ctx) {
  const PlayerView& v = ctx.view;
  std::map<std::string, std::string> values;
  values["knowledge"] = knowledge_text(v);
  values["candidates"] = candidates_text(v, ctx.derived);
  values["history"] = history_text(v.history, v.names, v.self);
  if (phase == Phase::Deduce) {
    std::string players;
    for (PlayerId p = 0; p < v.num_players; ++p) {
      if (!v.active[static_cast<std::size_t>(p)]) continue;
      if (!players.empty()) players += ", ";
      players += v.name(p);
    }
    values["players"] = players;
    values["unknown_cards"] = names_of(ctx.unknown_cards);
  } else if (phase == Phase::Act) {
    values["observations"] = observations_text(ctx);
    values["last_suggestion"] = last_suggestion_text(v);
    values["deduction"] = "Deduction this turn: " + or_none(v.last_deduction);
    values["reasoning"] = "Your previous reasoning: " + or_none(v.last_reasoning);
  }
  return values;
}

std::map<std::string, std::string> show_prompt_values(const ShowRequest& req) {
  std::map<std::string, std::string> values;
  values["suggester_name"] = req.suggester_name();
  values["suggestion.suspect"] = std::string(req.suggestion.cards.suspect.name());
  values["suggestion.weapon"] = std::string(req.suggestion.cards.weapon.name());
  values["suggestion.room"] = std::string(req.suggestion.cards.room.name());
  values["cards"] = join_names(req.matching);
  std::string hist;
  for (const ShowRecord& r : req.history) {
    if (!hist.empty()) hist += "\n";
    hist += "- " + std::string(r.card.name()) + " to " + req.names[static_cast<std::size_t>(r.to)] +
            " (T" + std::to_string(r.turn_index) + ")";
  }
  values["card_history"] = or_none(hist);
  return values;
}

std::string render_prompt(Phase phase, const PromptContext& ctx, const PromptTemplates& templates) {
  if (phase == Phase::ShowCard) throw Error("show-card prompts are rendered from a ShowRequest");
  return templates.render(phase, prompt_values(phase, ctx));
}

std::string render_show_prompt(const ShowRequest& req, const PromptTemplates& templates) {
  return templates.render(Phase::ShowCard, show_prompt_values(req));
}

std::string reprompt_suffix(const std::string& reason) {
  return "\n\nYour previous response could not be used (" + reason +
         "). Respond again, following the required format exactly.";
}

std::string serialize_history(const std::vector<HistoryEntry>& history,
                              const std::vector<std::string>& names) {
  return history_text(history, names, std::nullopt);
}

std::vector<HistoryEntry> parse_history(const std::string& text,
                                        const std::vector<std::string>& names) {
  static const std::regex line_re(
      R"(^T(\d+)\. (.+?) suggested: (.+?), (.+?), (.+?) --> (?:disproved by (.+?)|not disproved)(?: \(passed: (.+?)\))?(?: \[(?:shown to you|you showed): (.+?)\])?$)");
  auto player = [&](const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<PlayerId>(i);
    }
    throw Error("unknown player name '" + name + "' in history");
  };
  std::vector<HistoryEntry> out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line == "History: (none)") return out;
  if (line != "History:") throw Error("history must start with 'History:'");
  while (std::getline(in, line)) {
    std::smatch m;
    if (!std::regex_match(line, m, line_re)) throw Error("malformed history line: " + line);
    HistoryEntry e;
    e.turn_index = std::stoi(m[1].str());
    e.suggester = player(m[2].str());
    e.cards = make_triple(card_named(m[3].str()), card_named(m[4].str()), card_named(m[5].str()));
    if (m[6].matched) e.disprover = player(m[6].str());
    if (m[7].matched) {
      std::string rest = m[7].str();
      std::size_t pos = 0;
      while (pos <= rest.size()) {
        const auto comma = rest.find(", ", pos);
        e.passers.push_back(player(rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 2;
      }
    }
    if (m[8].matched) e.shown = card_named(m[8].str());
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace clue
