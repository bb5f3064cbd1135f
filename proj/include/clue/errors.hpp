#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace clue {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownCard : public Error {
 public:
  explicit UnknownCard(const std::string& text) : Error("unknown card: '" + text + "'") {}
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// Raised by the knowledge base when an observation or inference contradicts
// what is already known.
class Inconsistent : public Error {
 public:
  using Error::Error;
};

class InconsistentEvent : public Inconsistent {
 public:
  using Inconsistent::Inconsistent;
};

class CapExceeded : public Error {
 public:
  CapExceeded(std::uint64_t nodes, std::uint64_t partial)
      : Error("search cap exceeded after " + std::to_string(nodes) + " nodes (" +
              std::to_string(partial) + " worlds found)"),
        nodes_visited(nodes),
        partial_count(partial) {}
  std::uint64_t nodes_visited;
  std::uint64_t partial_count;
};

}  // namespace clue
