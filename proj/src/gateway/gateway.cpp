#include "ige/gateway/gateway.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace ige::gateway {

using ordered_json = nlohmann::ordered_json;

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::state_select: return "state_select";
    case Stage::action_select: return "action_select";
    case Stage::filter_accept: return "filter_accept";
    case Stage::filter_reject: return "filter_reject";
    case Stage::baseline_action: return "baseline_action";
    case Stage::reflection: return "reflection";
  }
  return "unknown";
}

namespace {

Stage stage_from_string(const std::string& s) {
  if (s == "state_select") return Stage::state_select;
  if (s == "action_select") return Stage::action_select;
  if (s == "filter_accept") return Stage::filter_accept;
  if (s == "filter_reject") return Stage::filter_reject;
  if (s == "baseline_action") return Stage::baseline_action;
  if (s == "reflection") return Stage::reflection;
  throw GatewayError("unknown stage tag '" + s + "'");
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v != nullptr ? std::string(v) : fallback;
}

ordered_json exchange_to_json(const CompletionExchange& e) {
  ordered_json j;
  j["index"] = e.index;
  j["stage"] = to_string(e.stage);
  j["digest"] = e.digest;
  j["model"] = e.request.params.model;
  j["temperature"] = e.request.params.temperature;
  j["max_new_tokens"] = e.request.params.max_new_tokens;
  j["response_format"] = e.request.params.response_format;
  ordered_json messages = ordered_json::array();
  for (const auto& m : e.request.messages) {
    ordered_json msg;
    msg["role"] = m.role;
    msg["content"] = m.content;
    messages.push_back(msg);
  }
  j["messages"] = messages;
  j["response"] = e.response;
  j["latency_ms"] = e.latency_ms;
  j["parse_outcome"] = e.parse_outcome;
  return j;
}

CompletionExchange exchange_from_json(const ordered_json& j) {
  CompletionExchange e;
  e.index = j.at("index").get<int>();
  e.stage = stage_from_string(j.at("stage").get<std::string>());
  e.digest = j.at("digest").get<std::string>();
  e.request.params.model = j.at("model").get<std::string>();
  e.request.params.temperature = j.at("temperature").get<double>();
  e.request.params.max_new_tokens = j.at("max_new_tokens").get<int>();
  e.request.params.response_format = j.at("response_format").get<std::string>();
  for (const auto& m : j.at("messages")) {
    e.request.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
  }
  e.response = j.at("response").get<std::string>();
  e.latency_ms = j.at("latency_ms").get<std::int64_t>();
  e.parse_outcome = j.at("parse_outcome").get<std::string>();
  return e;
}

}  // namespace

ModelParams default_model_params(const std::string& env_name) {
  ModelParams p;
  if (env_name == "textmaze") {
    p.temperature = 0.3;
    p.response_format = "text";
  } else {
    p.temperature = 0.7;
    p.response_format = "json_object";
  }
  return p;
}

std::string request_digest(Stage stage, const CompletionRequest& request) {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0x1f;
    h *= 1099511628211ULL;
  };
  mix(to_string(stage));
  for (const auto& m : request.messages) {
    mix(m.role);
    mix(m.content);
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

// --- RateLimiter ----------------------------------------------------------

struct RateLimiter::Impl {
  std::mutex mu;
  double min_interval_ms = 0.0;
  std::chrono::steady_clock::time_point next_allowed = std::chrono::steady_clock::now();
};

RateLimiter::RateLimiter() : impl_(std::make_shared<Impl>()) {}

RateLimiter& RateLimiter::instance() {
  static RateLimiter limiter;
  return limiter;
}

void RateLimiter::set_requests_per_minute(double rpm) {
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->min_interval_ms = rpm > 0.0 ? 60000.0 / rpm : 0.0;
}

void RateLimiter::acquire() {
  std::chrono::steady_clock::time_point wait_until;
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (impl_->min_interval_ms <= 0.0) return;
    auto now = std::chrono::steady_clock::now();
    auto interval = std::chrono::milliseconds(static_cast<std::int64_t>(impl_->min_interval_ms));
    if (impl_->next_allowed < now) impl_->next_allowed = now;
    wait_until = impl_->next_allowed;
    impl_->next_allowed += interval;
  }
  std::this_thread::sleep_until(wait_until);
}

// --- Gateway --------------------------------------------------------------

struct Gateway::State {
  Mode mode = Mode::replay;
  ModelParams params;
  HttpSettings http;
  Responder responder;

  std::string transcript_path;
  std::ofstream out;

  std::vector<CompletionExchange> recorded;  // replay source
  std::size_t cursor = 0;

  std::vector<CompletionExchange> exchanges;  // this session, in order
  bool pending_write = false;                 // last exchange not yet flushed
  int fallbacks = 0;

  void flush_pending() {
    if (!pending_write) return;
    out << exchange_to_json(exchanges.back()).dump() << '\n';
    out.flush();
    pending_write = false;
  }

  std::string http_complete(const CompletionRequest& request);
};

std::string Gateway::State::http_complete(const CompletionRequest& request) {
  std::string base = !http.base_url.empty() ? http.base_url : env_or("OPENAI_BASE_URL", "");
  std::string key = !http.api_key.empty() ? http.api_key : env_or("OPENAI_API_KEY", "");
  if (base.empty()) {
    throw GatewayError("live mode needs an endpoint: set OPENAI_BASE_URL or HttpSettings.base_url");
  }

  // Split "scheme://host[:port]" from an optional path prefix such as "/v1".
  std::string host = base;
  std::string prefix;
  auto scheme_end = base.find("://");
  if (scheme_end != std::string::npos) {
    auto path_start = base.find('/', scheme_end + 3);
    if (path_start != std::string::npos) {
      host = base.substr(0, path_start);
      prefix = base.substr(path_start);
    }
  }
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  ordered_json body;
  body["model"] = request.params.model;
  body["temperature"] = request.params.temperature;
  body["max_tokens"] = request.params.max_new_tokens;
  if (request.params.response_format == "json_object") {
    body["response_format"] = ordered_json{{"type", "json_object"}};
  }
  ordered_json messages = ordered_json::array();
  for (const auto& m : request.messages) {
    messages.push_back(ordered_json{{"role", m.role}, {"content", m.content}});
  }
  body["messages"] = messages;
  const std::string payload = body.dump();

  std::string last_error;
  for (int attempt = 0; attempt < http.max_attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<std::int64_t>(http.initial_backoff_ms) << (attempt - 1)));
    }
    RateLimiter::instance().acquire();
    httplib::Client client(host);
    client.set_read_timeout(120, 0);
    client.set_connection_timeout(15, 0);
    httplib::Headers headers;
    if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);
    auto res = client.Post(prefix + "/chat/completions", headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "http status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw GatewayError("completion request rejected with status " + std::to_string(res->status) +
                         ": " + res->body);
    }
    ordered_json parsed = ordered_json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty()) {
      last_error = "malformed completion body";
      continue;
    }
    return parsed["choices"][0].at("message").at("content").get<std::string>();
  }
  throw GatewayError("completion failed after " + std::to_string(http.max_attempts) +
                     " attempts; last error: " + last_error);
}

Gateway::Gateway(std::unique_ptr<State> state) : state_(std::move(state)) {}
Gateway::Gateway(Gateway&&) noexcept = default;
Gateway& Gateway::operator=(Gateway&&) noexcept = default;

Gateway::~Gateway() {
  if (state_) state_->flush_pending();
}

Gateway Gateway::make_live(ModelParams params, HttpSettings http) {
  auto state = std::make_unique<State>();
  state->mode = Mode::live;
  state->params = std::move(params);
  state->http = std::move(http);
  return Gateway(std::move(state));
}

Gateway Gateway::make_record(ModelParams params, std::string transcript_path, Responder responder,
                             HttpSettings http) {
  auto state = std::make_unique<State>();
  state->mode = Mode::record;
  state->params = std::move(params);
  state->http = std::move(http);
  state->responder = std::move(responder);
  state->transcript_path = std::move(transcript_path);
  state->out.open(state->transcript_path, std::ios::trunc);
  if (!state->out) {
    throw GatewayError("cannot open transcript for writing: " + state->transcript_path);
  }
  return Gateway(std::move(state));
}

Gateway Gateway::make_replay(const std::string& transcript_path) {
  auto state = std::make_unique<State>();
  state->mode = Mode::replay;
  state->recorded = load_transcript(transcript_path);
  if (!state->recorded.empty()) {
    state->params = state->recorded.front().request.params;
  }
  return Gateway(std::move(state));
}

std::string Gateway::complete(Stage stage, const std::vector<ChatMessage>& messages) {
  State& s = *state_;
  s.flush_pending();

  CompletionRequest request;
  request.params = s.params;
  request.messages = messages;
  const std::string digest = request_digest(stage, request);

  CompletionExchange exchange;
  exchange.index = static_cast<int>(s.exchanges.size());
  exchange.stage = stage;
  exchange.digest = digest;
  exchange.request = request;

  if (s.mode == Mode::replay) {
    if (s.cursor >= s.recorded.size()) {
      throw ReplayMismatch("transcript exhausted at exchange " + std::to_string(s.cursor));
    }
    const CompletionExchange& want = s.recorded[s.cursor];
    if (want.stage != stage) {
      throw ReplayMismatch("replay drift at exchange " + std::to_string(s.cursor) + ": expected stage " +
                           to_string(want.stage) + ", got " + to_string(stage));
    }
    if (want.digest != digest) {
      throw ReplayMismatch("replay drift at exchange " + std::to_string(s.cursor) +
                           ": prompt digest mismatch for stage " + to_string(stage));
    }
    ++s.cursor;
    exchange.response = want.response;
    exchange.latency_ms = want.latency_ms;
    s.exchanges.push_back(std::move(exchange));
    return s.exchanges.back().response;
  }

  if (s.responder) {
    exchange.response = s.responder(stage, request);
    exchange.latency_ms = 0;
  } else {
    auto begin = std::chrono::steady_clock::now();
    exchange.response = s.http_complete(request);
    exchange.latency_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - begin)
            .count();
  }
  s.exchanges.push_back(std::move(exchange));
  if (s.mode == Mode::record) s.pending_write = true;
  return s.exchanges.back().response;
}

void Gateway::mark_fallback() {
  State& s = *state_;
  if (s.exchanges.empty()) return;
  if (s.exchanges.back().parse_outcome != "fallback") {
    s.exchanges.back().parse_outcome = "fallback";
    ++s.fallbacks;
  }
}

void Gateway::finish() { state_->flush_pending(); }

Mode Gateway::mode() const { return state_->mode; }
const ModelParams& Gateway::params() const { return state_->params; }
int Gateway::exchange_count() const { return static_cast<int>(state_->exchanges.size()); }
int Gateway::fallback_count() const { return state_->fallbacks; }
const std::vector<CompletionExchange>& Gateway::exchanges() const { return state_->exchanges; }

int Gateway::remaining_replay() const {
  return static_cast<int>(state_->recorded.size() - state_->cursor);
}

std::vector<CompletionExchange> load_transcript(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GatewayError("cannot open transcript: " + path);
  std::vector<CompletionExchange> exchanges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw GatewayError("malformed transcript line " + std::to_string(line_no) + " in " + path);
    }
    exchanges.push_back(exchange_from_json(j));
  }
  return exchanges;
}

}  // namespace ige::gateway
