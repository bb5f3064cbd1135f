#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "clue/agent.hpp"
#include "clue/config.hpp"
#include "clue/gateway.hpp"
#include "clue/prompts.hpp"
#include "clue/rng.hpp"

namespace clue {

// A decision that needed no model: one attempt holding the canonical text.
AgentDecision canonical_decision(Phase phase, Parsed parsed);

// Never claims deductions; accuses only when its direct-elimination
// candidates pin every category.
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}
  AgentDecision deduce(const PromptContext& ctx) override;
  AgentDecision act(const PromptContext& ctx) override;
  AgentDecision show_card(const ShowRequest& req) override;

 private:
  Rng rng_;
};

struct OracleOptions {
  std::uint64_t node_cap = kDefaultNodeCap;
  int pool_size = 64;
};

// Exact possible-worlds reasoner. Claims every opponent-held card it can
// prove, accuses only once the envelope is certain, and picks suggestions
// that minimise the worst-case uncertainty left after the answer.
class OracleAgent : public Agent {
 public:
  explicit OracleAgent(std::uint64_t seed, OracleOptions options = {})
      : rng_(seed), options_(options) {}
  AgentDecision deduce(const PromptContext& ctx) override;
  AgentDecision act(const PromptContext& ctx) override;
  AgentDecision show_card(const ShowRequest& req) override;

  // Per-card possible locations after full inference on the view.
  std::array<LocationMask, Card::kCount> analyse(const PlayerView& view) const;

 private:
  Rng rng_;
  OracleOptions options_;
};

// Where the protocol agent gets its responses from.
class ResponseSource {
 public:
  virtual ~ResponseSource() = default;
  // One attempt: text, or a gateway error class in Attempt::error.
  virtual Attempt respond(Phase phase, const std::string& prompt) = 0;
};

struct ModelSettings {
  std::string model_id;
  double temperature = 0.7;
  int max_tokens = 2048;
  std::chrono::milliseconds timeout{60'000};
};

class GatewaySource : public ResponseSource {
 public:
  GatewaySource(Gateway& gateway, ModelSettings settings, GatewayLog* log)
      : gateway_(gateway), settings_(std::move(settings)), log_(log) {}
  Attempt respond(Phase phase, const std::string& prompt) override;

 private:
  Gateway& gateway_;
  ModelSettings settings_;
  GatewayLog* log_;
};

// Replays recorded attempts phase by phase, ignoring the prompt.
class RecordedSource : public ResponseSource {
 public:
  void push(Phase phase, const Attempt& a) { queues_[phase].push_back(a); }
  Attempt respond(Phase phase, const std::string& prompt) override;
  bool exhausted() const;

 private:
  std::map<Phase, std::deque<Attempt>> queues_;
};

// Renders the phase prompt, asks the source, parses and validates the
// response, and re-prompts up to three times before reporting a fallback.
class ProtocolAgent : public Agent {
 public:
  ProtocolAgent(std::unique_ptr<ResponseSource> source,
                const PromptTemplates& templates = PromptTemplates::builtin())
      : source_(std::move(source)), templates_(templates) {}
  AgentDecision deduce(const PromptContext& ctx) override;
  AgentDecision act(const PromptContext& ctx) override;
  AgentDecision show_card(const ShowRequest& req) override;

  // Prompts sent so far, in order; handy for tests.
  const std::vector<std::string>& prompts() const { return prompts_; }
  ResponseSource& source() { return *source_; }

 private:
  template <class Validate>
  AgentDecision run(Phase phase, const std::string& prompt, Validate validate);

  std::unique_ptr<ResponseSource> source_;
  const PromptTemplates& templates_;
  std::vector<std::string> prompts_;
};

// Everything needed to seat a roster entry.
struct AgentFactoryContext {
  std::uint64_t game_seed = 0;
  std::map<std::string, Gateway*> gateways;  // by provider; required for Llm seats
  GatewayLog* gateway_log = nullptr;
  const PromptTemplates* templates = nullptr;
  OracleOptions oracle;
  int max_tokens = 2048;
  std::chrono::milliseconds timeout{60'000};
};

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, PlayerId seat,
                                  const AgentFactoryContext& ctx);
std::uint64_t agent_seed(std::uint64_t game_seed, PlayerId seat);

}  // namespace clue
