#include "clue/response_parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <vector>

namespace clue {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_emphasis(std::string_view s) {
  s = trim(s);
  while (!s.empty() && (s.front() == '*' || s.front() == '_' || s.front() == '#' || s.front() == '>')) {
    s.remove_prefix(1);
    s = trim(s);
  }
  while (!s.empty() && (s.back() == '*' || s.back() == '_')) {
    s.remove_suffix(1);
    s = trim(s);
  }
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

bool is_fence(std::string_view line) { return trim(line).starts_with("```"); }

// Splits the response into label -> value. Text after a label line belongs to
// that label until the next recognised label.
std::map<std::string, std::string> split_labels(std::string_view text,
                                                const std::vector<std::string_view>& labels) {
  std::map<std::string, std::string> out;
  std::string* current = nullptr;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_fence(line)) continue;

    std::string_view probe = trim(line);
    while (!probe.empty() && (probe.front() == '*' || probe.front() == '_' || probe.front() == '#')) {
      probe.remove_prefix(1);
    }
    const std::size_t colon = probe.find(':');
    bool matched = false;
    if (colon != std::string_view::npos) {
      const std::string key = upper(strip_emphasis(probe.substr(0, colon)));
      if (std::find(labels.begin(), labels.end(), key) != labels.end()) {
        matched = true;
        auto [it, inserted] = out.try_emplace(key, std::string(strip_emphasis(probe.substr(colon + 1))));
        current = inserted ? &it->second : nullptr;
      }
    }
    if (!matched && current) {
      if (!current->empty()) current->push_back('\n');
      current->append(trim(line));
    }
  }
  for (auto& [k, v] : out) v = std::string(trim(v));
  return out;
}

const std::string& require(const std::map<std::string, std::string>& fields, const std::string& label) {
  auto it = fields.find(label);
  if (it == fields.end()) throw ParseError(ParseFailure::MissingLabel, "missing " + label);
  return it->second;
}

std::string first_line(std::string_view s) {
  const auto nl = s.find('\n');
  return std::string(trim(nl == std::string_view::npos ? s : s.substr(0, nl)));
}

bool is_none(std::string_view s) { return upper(strip_emphasis(s)) == "NONE"; }

Card card_token(std::string_view token) {
  std::string_view t = strip_emphasis(token);
  for (;;) {
    try {
      return parse_card(t);
    } catch (const UnknownCard&) {
    }
    // Tolerate trailing sentence punctuation without breaking "Mrs." names.
    if (t.empty() || (t.back() != '.' && t.back() != ';')) break;
    t = trim(t.substr(0, t.size() - 1));
  }
  throw ParseError(ParseFailure::UnknownCard, "unknown card '" + std::string(trim(token)) + "'");
}

std::vector<Card> card_list(std::string_view value) {
  std::vector<Card> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const std::size_t comma = value.find(',', pos);
    std::string_view tok = value.substr(pos, comma == std::string_view::npos ? value.size() - pos : comma - pos);
    pos = comma == std::string_view::npos ? value.size() + 1 : comma + 1;
    if (trim(tok).empty()) throw ParseError(ParseFailure::Arity, "empty entry in card list");
    out.push_back(card_token(tok));
  }
  return out;
}

Triple triple_of(std::string_view value, const std::string& label) {
  const auto cards = card_list(value);
  if (cards.size() != 3) {
    throw ParseError(ParseFailure::Arity, label + " needs 3 cards, got " + std::to_string(cards.size()));
  }
  try {
    return make_triple(cards[0], cards[1], cards[2]);
  } catch (const InvalidConfig&) {
    throw ParseError(ParseFailure::Arity, label + " needs one suspect, one weapon and one room");
  }
}

}  // namespace

std::string_view parse_failure_name(ParseFailure f) {
  switch (f) {
    case ParseFailure::MissingLabel: return "missing label";
    case ParseFailure::UnknownCard: return "unknown card";
    case ParseFailure::Arity: return "arity";
    case ParseFailure::EmptyReasoning: return "empty reasoning";
    case ParseFailure::InvalidChoice: return "invalid choice";
  }
  return "?";
}

DeductionClaim parse_deduction(std::string_view text) {
  const auto fields = split_labels(text, {"ANALYSIS", "DEDUCED_CARDS"});
  DeductionClaim out;
  out.analysis = require(fields, "ANALYSIS");
  const std::string cards = first_line(require(fields, "DEDUCED_CARDS"));
  if (out.analysis.empty()) throw ParseError(ParseFailure::EmptyReasoning, "ANALYSIS is empty");
  if (cards.empty()) throw ParseError(ParseFailure::Arity, "DEDUCED_CARDS is empty");
  if (!is_none(cards)) {
    for (Card c : card_list(cards)) out.cards.insert(c);
  }
  return out;
}

Move parse_move(std::string_view text) {
  const auto fields = split_labels(text, {"SUMMARY", "REASONING", "SUGGESTION", "ACCUSATION"});
  Move out;
  out.summary = require(fields, "SUMMARY");
  out.reasoning = require(fields, "REASONING");
  const std::string suggestion = first_line(require(fields, "SUGGESTION"));
  const std::string accusation = first_line(require(fields, "ACCUSATION"));
  if (out.reasoning.empty()) throw ParseError(ParseFailure::EmptyReasoning, "REASONING is empty");
  out.suggestion = triple_of(suggestion, "SUGGESTION");
  if (accusation.empty()) throw ParseError(ParseFailure::Arity, "ACCUSATION is empty");
  if (!is_none(accusation)) out.accusation = triple_of(accusation, "ACCUSATION");
  return out;
}

Show parse_show(std::string_view text) {
  const auto fields = split_labels(text, {"REASONING", "SHOW"});
  Show out;
  out.reasoning = require(fields, "REASONING");
  const std::string card = first_line(require(fields, "SHOW"));
  if (out.reasoning.empty()) throw ParseError(ParseFailure::EmptyReasoning, "REASONING is empty");
  const auto cards = card_list(card);
  if (cards.size() != 1) throw ParseError(ParseFailure::Arity, "SHOW needs exactly one card");
  out.card = cards.front();
  return out;
}

Parsed parse_phase_response(Phase phase, std::string_view text) {
  switch (phase) {
    case Phase::Deduce: return parse_deduction(text);
    case Phase::Act: return parse_move(text);
    case Phase::ShowCard: return parse_show(text);
  }
  return {};
}

std::string render_response(const Parsed& parsed) {
  if (const auto* d = std::get_if<DeductionClaim>(&parsed)) {
    return "ANALYSIS: " + d->analysis + "\nDEDUCED_CARDS: " +
           (d->cards.empty() ? std::string("NONE") : join_names(d->cards));
  }
  if (const auto* m = std::get_if<Move>(&parsed)) {
    return "SUMMARY: " + m->summary + "\nREASONING: " + m->reasoning +
           "\nSUGGESTION: " + m->suggestion.to_string() +
           "\nACCUSATION: " + (m->accusation ? m->accusation->to_string() : std::string("NONE"));
  }
  if (const auto* s = std::get_if<Show>(&parsed)) {
    return "REASONING: " + s->reasoning + "\nSHOW: " + std::string(s->card.name());
  }
  return {};
}

}  // namespace clue
