#pragma once

#include <string>
#include <string_view>

#include "clue/decision.hpp"
#include "clue/errors.hpp"

namespace clue {

enum class ParseFailure { MissingLabel, UnknownCard, Arity, EmptyReasoning, InvalidChoice };

std::string_view parse_failure_name(ParseFailure f);

class ParseError : public Error {
 public:
  ParseError(ParseFailure reason, const std::string& detail)
      : Error(std::string(parse_failure_name(reason)) + ": " + detail), reason(reason) {}
  ParseFailure reason;
};

// Label-anchored, line-oriented parsing of one phase's response. Labels match
// case-insensitively at line start; markdown fences and emphasis around labels
// are ignored; NONE is the explicit null. Throws ParseError.
Parsed parse_phase_response(Phase phase, std::string_view text);

DeductionClaim parse_deduction(std::string_view text);
Move parse_move(std::string_view text);
Show parse_show(std::string_view text);

// Canonical response text for a parsed payload; parses back to the same value.
std::string render_response(const Parsed& parsed);

}  // namespace clue
