#include "clue/gateway.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <openssl/sha.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

namespace clue {

using nlohmann::json;

void CompletionRequest::validate() const {
  if (model_id.empty()) throw InvalidConfig("completion request needs a model id");
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw InvalidConfig("temperature must be within [0, 2]");
  }
  if (timeout.count() <= 0) throw InvalidConfig("timeout must be positive");
  if (max_tokens <= 0) throw InvalidConfig("max_tokens must be positive");
}

std::string CompletionRequest::digest() const {
  const json j = {{"model_id", model_id},
                  {"system_text", system_text},
                  {"user_text", user_text},
                  {"temperature", temperature},
                  {"max_tokens", max_tokens}};
  const std::string canon = j.dump();
  unsigned char md[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(canon.data()), canon.size(), md);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char b : md) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

std::string_view gateway_error_name(GatewayErrorClass c) {
  switch (c) {
    case GatewayErrorClass::None: return "none";
    case GatewayErrorClass::Timeout: return "timeout";
    case GatewayErrorClass::Transport: return "transport";
    case GatewayErrorClass::Provider: return "provider";
  }
  return "none";
}

GatewayErrorClass parse_gateway_error(std::string_view s) {
  for (auto c : {GatewayErrorClass::None, GatewayErrorClass::Timeout, GatewayErrorClass::Transport,
                 GatewayErrorClass::Provider}) {
    if (gateway_error_name(c) == s) return c;
  }
  throw Error("unknown gateway error class '" + std::string(s) + "'");
}

bool GatewayError::transient() const {
  if (cls == GatewayErrorClass::Provider) return status == 429 || status >= 500;
  return cls != GatewayErrorClass::None;
}

// ---------------------------------------------------------------------------
// Mock

std::string MockBackend::complete(const CompletionRequest& req) {
  std::lock_guard lock(mu_);
  if (next_ >= entries_.size()) {
    throw FixtureMismatch("mock transcript exhausted after " + std::to_string(next_) + " calls");
  }
  const Entry& e = entries_[next_];
  if (!e.expect.empty() && req.user_text.find(e.expect) == std::string::npos) {
    throw FixtureMismatch("mock call " + std::to_string(next_) + ": prompt does not contain '" +
                          e.expect + "'");
  }
  if (!e.expect_digest.empty() && req.digest() != e.expect_digest) {
    throw FixtureMismatch("mock call " + std::to_string(next_) + ": request digest differs");
  }
  ++next_;
  if (e.error != GatewayErrorClass::None) {
    throw GatewayError(e.error, "scripted failure", e.status);
  }
  return e.response;
}

std::size_t MockBackend::consumed() const {
  std::lock_guard lock(mu_);
  return next_;
}

std::size_t MockBackend::remaining() const {
  std::lock_guard lock(mu_);
  return entries_.size() - next_;
}

namespace {

std::vector<MockBackend::Entry> parse_entries(const json& arr) {
  if (!arr.is_array()) throw InvalidConfig("mock transcript must be an array");
  std::vector<MockBackend::Entry> out;
  for (const json& j : arr) {
    if (!j.is_object()) throw InvalidConfig("mock transcript entries must be objects");
    MockBackend::Entry e;
    for (const auto& [key, value] : j.items()) {
      if (key == "expect") {
        e.expect = value.get<std::string>();
      } else if (key == "expect_digest") {
        e.expect_digest = value.get<std::string>();
      } else if (key == "response") {
        e.response = value.get<std::string>();
      } else if (key == "error") {
        e.error = parse_gateway_error(value.get<std::string>());
      } else if (key == "status") {
        e.status = value.get<int>();
      } else {
        throw InvalidConfig("unknown mock entry field '" + key + "'");
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

json entry_json(const MockBackend::Entry& e) {
  json j = json::object();
  if (!e.expect.empty()) j["expect"] = e.expect;
  if (!e.expect_digest.empty()) j["expect_digest"] = e.expect_digest;
  if (e.error != GatewayErrorClass::None) {
    j["error"] = gateway_error_name(e.error);
    if (e.status) j["status"] = e.status;
  } else {
    j["response"] = e.response;
  }
  return j;
}

}  // namespace

MockFixture MockFixture::parse(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("mock fixture is not valid JSON: ") + e.what());
  }
  MockFixture f;
  try {
    if (j.is_array()) {
      f.shared = true;
      f.games.push_back(parse_entries(j));
    } else if (j.is_object() && j.contains("games") && j.size() == 1) {
      for (const json& g : j.at("games")) f.games.push_back(parse_entries(g));
    } else {
      throw InvalidConfig("mock fixture must be an array or {\"games\": [...]}");
    }
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("malformed mock fixture: ") + e.what());
  }
  return f;
}

MockFixture MockFixture::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidConfig("cannot read mock fixture " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::vector<MockBackend::Entry> MockFixture::from_records(const GatewayLog& records) {
  std::vector<MockBackend::Entry> out;
  for (const GatewayRecord& r : records) {
    MockBackend::Entry e;
    e.expect_digest = r.request_digest;
    e.response = r.response;
    e.error = r.error;
    e.status = r.status;
    out.push_back(std::move(e));
  }
  return out;
}

std::string MockFixture::dump() const {
  auto transcript = [](const std::vector<MockBackend::Entry>& entries) {
    json arr = json::array();
    for (const auto& e : entries) arr.push_back(entry_json(e));
    return arr;
  };
  if (shared) return transcript(games.empty() ? std::vector<MockBackend::Entry>{} : games[0]).dump(2);
  json all = json::array();
  for (const auto& g : games) all.push_back(transcript(g));
  return json{{"games", all}}.dump(2);
}

// ---------------------------------------------------------------------------
// HTTP adapters

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

std::string require_env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) throw GatewayUnavailable(std::string(name) + " is not set");
  return v;
}

// Splits "https://host:port/prefix" into the client origin and path prefix.
std::pair<std::string, std::string> split_base(const std::string& base) {
  const auto scheme = base.find("://");
  const auto path = base.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path == std::string::npos) return {base, ""};
  std::string prefix = base.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base.substr(0, path), prefix};
}

json post_json(const std::string& base_url, const std::string& path, const httplib::Headers& headers,
               const json& body, std::chrono::milliseconds timeout) {
  const auto [origin, prefix] = split_base(base_url);
  httplib::Client client(origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  auto res = client.Post(prefix + path, headers, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           (err == httplib::Error::Read && errno == EAGAIN);
    throw GatewayError(timed_out ? GatewayErrorClass::Timeout : GatewayErrorClass::Transport,
                       httplib::to_string(err));
  }
  if (res->status != 200) {
    // The body may echo request details but never the key, which only travels in headers.
    throw GatewayError(GatewayErrorClass::Provider,
                       "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200),
                       res->status);
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception&) {
    throw GatewayError(GatewayErrorClass::Provider, "response body is not JSON", res->status);
  }
}

}  // namespace

OpenAIBackend::OpenAIBackend()
    : OpenAIBackend(env_or("OPENAI_BASE_URL", "https://api.openai.com"),
                    require_env("OPENAI_API_KEY")) {}

OpenAIBackend::OpenAIBackend(std::string base_url, std::string api_key)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

std::string OpenAIBackend::complete(const CompletionRequest& req) {
  json messages = json::array();
  if (!req.system_text.empty()) messages.push_back({{"role", "system"}, {"content", req.system_text}});
  messages.push_back({{"role", "user"}, {"content", req.user_text}});
  const json body = {{"model", req.model_id},
                     {"messages", messages},
                     {"temperature", req.temperature},
                     {"max_tokens", req.max_tokens}};
  const json res = post_json(base_url_, "/v1/chat/completions",
                             {{"Authorization", "Bearer " + api_key_}}, body, req.timeout);
  try {
    const json& content = res.at("choices").at(0).at("message").at("content");
    return content.is_string() ? content.get<std::string>() : std::string();
  } catch (const json::exception&) {
    throw GatewayError(GatewayErrorClass::Provider, "unexpected chat completion shape", 200);
  }
}

GeminiBackend::GeminiBackend()
    : GeminiBackend(env_or("GEMINI_BASE_URL", "https://generativelanguage.googleapis.com"),
                    require_env("GEMINI_API_KEY")) {}

GeminiBackend::GeminiBackend(std::string base_url, std::string api_key)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

std::string GeminiBackend::complete(const CompletionRequest& req) {
  json body = {
      {"contents", json::array({{{"role", "user"}, {"parts", json::array({{{"text", req.user_text}}})}}})},
      {"generationConfig", {{"temperature", req.temperature}, {"maxOutputTokens", req.max_tokens}}}};
  if (!req.system_text.empty()) {
    body["systemInstruction"] = {{"parts", json::array({{{"text", req.system_text}}})}};
  }
  const json res = post_json(base_url_, "/v1beta/models/" + req.model_id + ":generateContent",
                             {{"x-goog-api-key", api_key_}}, body, req.timeout);
  try {
    std::string text;
    for (const json& part : res.at("candidates").at(0).at("content").at("parts")) {
      if (part.contains("text")) text += part.at("text").get<std::string>();
    }
    return text;
  } catch (const json::exception&) {
    throw GatewayError(GatewayErrorClass::Provider, "unexpected generateContent shape", 200);
  }
}

std::shared_ptr<Backend> make_provider_backend(const std::string& provider) {
  if (provider == "openai") return std::make_shared<OpenAIBackend>();
  if (provider == "gemini") return std::make_shared<GeminiBackend>();
  throw GatewayUnavailable("unknown provider '" + provider + "'");
}

// ---------------------------------------------------------------------------
// Gateway

Gateway::Gateway(std::shared_ptr<Backend> backend, GatewayOptions options)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      slots_(std::clamp(options_.max_concurrent, 1, 1024)) {
  if (!backend_) throw InvalidConfig("gateway needs a backend");
  if (options_.retry.max_attempts < 1) throw InvalidConfig("retry cap must be at least 1");
  // Without an injected sleeper, deterministic backends are retried at once.
  if (!options_.sleeper && !backend_->deterministic()) {
    options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::string Gateway::complete(const CompletionRequest& req, GatewayLog* log) {
  req.validate();
  const std::string digest = req.digest();
  const bool deterministic = backend_->deterministic();
  for (int attempt = 0;; ++attempt) {
    GatewayRecord rec;
    rec.request_digest = digest;
    rec.model_id = req.model_id;
    rec.retry = attempt;
    const auto start = std::chrono::steady_clock::now();
    std::optional<GatewayError> failure;
    slots_.acquire();
    try {
      rec.response = backend_->complete(req);
    } catch (const GatewayError& e) {
      failure = e;
    } catch (...) {
      slots_.release();
      throw;
    }
    slots_.release();
    if (!deterministic) {
      rec.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    if (failure) {
      rec.error = failure->cls;
      rec.status = failure->status;
      rec.detail = failure->what();
    }
    if (log) log->push_back(rec);
    if (!failure) return rec.response;
    if (!failure->transient() || attempt + 1 >= options_.retry.max_attempts) throw *failure;
    if (options_.sleeper && !options_.retry.backoff.empty()) {
      const auto& b = options_.retry.backoff;
      options_.sleeper(b[std::min<std::size_t>(static_cast<std::size_t>(attempt), b.size() - 1)]);
    }
  }
}

}  // namespace clue
