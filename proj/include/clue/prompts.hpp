#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clue/agent.hpp"
#include "clue/errors.hpp"

namespace clue {

class MissingContext : public Error {
 public:
  explicit MissingContext(const std::string& placeholder)
      : Error("no value for prompt placeholder {" + placeholder + "}") {}
};

// Phase templates with {name} placeholders. Placeholders are lowercase
// identifiers (dots allowed); other braces such as "{Suspect, Weapon, Room}"
// are literal text.
class PromptTemplates {
 public:
  // Templates compiled into the library.
  static const PromptTemplates& builtin();
  // deduce.txt, act.txt and show.txt from dir; missing files fall back to
  // the builtin text.
  static PromptTemplates load(const std::filesystem::path& dir);

  const std::string& text(Phase phase) const;
  std::string render(Phase phase, const std::map<std::string, std::string>& values) const;
  static std::vector<std::string> placeholders(const std::string& text);

 private:
  std::map<Phase, std::string> text_;
};

std::map<std::string, std::string> prompt_values(Phase phase, const PromptContext& ctx);
std::map<std::string, std::string> show_prompt_values(const ShowRequest& req);

std::string render_prompt(Phase phase, const PromptContext& ctx,
                          const PromptTemplates& templates = PromptTemplates::builtin());
std::string render_show_prompt(const ShowRequest& req,
                               const PromptTemplates& templates = PromptTemplates::builtin());

// Appended to the original prompt when a response is rejected.
std::string reprompt_suffix(const std::string& reason);

// "T<n>. <player> suggested: S, W, R --> disproved by <player> (passed: ...)"
// lines, or "History: (none)".
std::string serialize_history(const std::vector<HistoryEntry>& history,
                              const std::vector<std::string>& names);
// Inverse of serialize_history (round numbers are not serialized).
std::vector<HistoryEntry> parse_history(const std::string& text,
                                        const std::vector<std::string>& names);

}  // namespace clue
