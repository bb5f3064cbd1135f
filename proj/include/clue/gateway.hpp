#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "clue/errors.hpp"

namespace clue {

struct CompletionRequest {
  std::string model_id;
  std::string system_text;
  std::string user_text;
  double temperature = 0.7;
  int max_tokens = 2048;
  std::chrono::milliseconds timeout{60'000};

  // Throws InvalidConfig.
  void validate() const;
  // SHA-256 over the canonical JSON form of every field except the timeout.
  std::string digest() const;
};

enum class GatewayErrorClass { None, Timeout, Transport, Provider };

std::string_view gateway_error_name(GatewayErrorClass c);
GatewayErrorClass parse_gateway_error(std::string_view s);

class GatewayError : public Error {
 public:
  GatewayError(GatewayErrorClass cls, const std::string& detail, int status = 0)
      : Error(std::string(gateway_error_name(cls)) + ": " + detail), cls(cls), status(status) {}
  GatewayErrorClass cls;
  int status;  // provider HTTP status, 0 otherwise

  // Timeouts, transport failures, 429 and 5xx are worth retrying.
  bool transient() const;
};

// A provider cannot be used at all (missing credentials, unknown provider).
class GatewayUnavailable : public Error {
 public:
  using Error::Error;
};

// The mock saw a prompt its transcript did not expect. This is a harness
// failure, not a model failure, so it is never absorbed by the agent protocol.
class FixtureMismatch : public Error {
 public:
  using Error::Error;
};

// One backend call.
struct GatewayRecord {
  std::string request_digest;
  std::string model_id;
  std::string response;
  double latency_ms = 0;
  int retry = 0;  // 0 for the first call of a complete(), 1 for the first retry, ...
  GatewayErrorClass error = GatewayErrorClass::None;
  int status = 0;
  std::string detail;
  bool operator==(const GatewayRecord&) const = default;
};

// Per-game record sink. Games run on one thread each, so no locking.
using GatewayLog = std::vector<GatewayRecord>;

class Backend {
 public:
  virtual ~Backend() = default;
  // Returns the response text or throws GatewayError.
  virtual std::string complete(const CompletionRequest& req) = 0;
  // Deterministic backends report zero latency and are never slept on.
  virtual bool deterministic() const { return false; }
};

// Scripted transcript. Entries are consumed in order; each one checks the
// incoming request against `expect` (substring of the user text) and/or
// `expect_digest` before answering with `response` or raising `error`.
class MockBackend : public Backend {
 public:
  struct Entry {
    std::string expect;
    std::string expect_digest;
    std::string response;
    GatewayErrorClass error = GatewayErrorClass::None;
    int status = 0;
  };

  explicit MockBackend(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  std::string complete(const CompletionRequest& req) override;
  bool deterministic() const override { return true; }

  std::size_t consumed() const;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
  std::size_t next_ = 0;
};

// A transcript file is either one array of entries shared by every game, or
// {"games": [[...], [...]]} with one transcript per game index.
struct MockFixture {
  std::vector<std::vector<MockBackend::Entry>> games;
  bool shared = false;

  static MockFixture load(const std::filesystem::path& path);
  static MockFixture parse(const std::string& json_text);
  // Transcript that re-executes the recorded calls offline.
  static std::vector<MockBackend::Entry> from_records(const GatewayLog& records);
  std::string dump() const;
};

// Answers from a function; used by tests to script per-model behaviour.
class CallbackBackend : public Backend {
 public:
  explicit CallbackBackend(std::function<std::string(const CompletionRequest&)> fn)
      : fn_(std::move(fn)) {}
  std::string complete(const CompletionRequest& req) override { return fn_(req); }
  bool deterministic() const override { return true; }

 private:
  std::function<std::string(const CompletionRequest&)> fn_;
};

// OpenAI-style chat completions:
//   POST {OPENAI_BASE_URL}/v1/chat/completions, Authorization: Bearer $OPENAI_API_KEY
class OpenAIBackend : public Backend {
 public:
  OpenAIBackend();  // reads the environment; throws GatewayUnavailable without a key
  OpenAIBackend(std::string base_url, std::string api_key);
  std::string complete(const CompletionRequest& req) override;

 private:
  std::string base_url_;
  std::string api_key_;
};

// Gemini-style generateContent:
//   POST {GEMINI_BASE_URL}/v1beta/models/{model}:generateContent, x-goog-api-key: $GEMINI_API_KEY
class GeminiBackend : public Backend {
 public:
  GeminiBackend();
  GeminiBackend(std::string base_url, std::string api_key);
  std::string complete(const CompletionRequest& req) override;

 private:
  std::string base_url_;
  std::string api_key_;
};

std::shared_ptr<Backend> make_provider_backend(const std::string& provider);

struct RetryPolicy {
  int max_attempts = 3;
  std::vector<std::chrono::milliseconds> backoff{std::chrono::milliseconds(1000),
                                                 std::chrono::milliseconds(2000),
                                                 std::chrono::milliseconds(4000)};
};

struct GatewayOptions {
  RetryPolicy retry;
  int max_concurrent = 4;
  std::function<void(std::chrono::milliseconds)> sleeper;  // defaults to this_thread::sleep_for
};

// Shared by every game of a tournament. Each call goes through the
// concurrency ceiling, retries transient errors and appends one record per
// backend call to the caller's log.
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<Backend> backend, GatewayOptions options = {});

  // Throws the last GatewayError once the retry budget is spent.
  std::string complete(const CompletionRequest& req, GatewayLog* log = nullptr);

  Backend& backend() { return *backend_; }

 private:
  std::shared_ptr<Backend> backend_;
  GatewayOptions options_;
  std::counting_semaphore<1024> slots_;
};

}  // namespace clue
