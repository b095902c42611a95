#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ige/gateway/messages.hpp"

namespace ige::gateway {

enum class Mode { live, record, replay };

struct GatewayError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a replayed request does not line up with the transcript
/// (different stage or prompt digest, or the transcript ran out).
struct ReplayMismatch : GatewayError {
  using GatewayError::GatewayError;
};

struct HttpSettings {
  std::string base_url;  // falls back to $OPENAI_BASE_URL
  std::string api_key;   // falls back to $OPENAI_API_KEY
  int max_attempts = 5;
  int initial_backoff_ms = 1000;  // doubles after each failed attempt
};

/// Process-wide pacing of live completion calls.
class RateLimiter {
public:
  static RateLimiter& instance();
  void set_requests_per_minute(double rpm);  // <= 0 disables pacing
  void acquire();

private:
  RateLimiter();
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Deterministic stand-in for a live model, used to record transcripts without
/// network access.
using Responder = std::function<std::string(Stage, const CompletionRequest&)>;

/// Single door to the language model. Three modes:
///  - live: POST chat completions to an OpenAI-compatible endpoint, with
///    bounded retries and process-wide rate limiting.
///  - record: like live (or a scripted responder) but every exchange is
///    appended to a transcript file.
///  - replay: answer exclusively from a transcript; each request must match
///    the recorded stage and prompt digest, and no network is touched.
///
/// Instances are not thread-safe; create one per run.
class Gateway {
public:
  static Gateway make_live(ModelParams params, HttpSettings http = {});
  static Gateway make_record(ModelParams params, std::string transcript_path,
                             Responder responder = nullptr, HttpSettings http = {});
  static Gateway make_replay(const std::string& transcript_path);

  Gateway(Gateway&&) noexcept;
  Gateway& operator=(Gateway&&) noexcept;
  ~Gateway();

  /// Request one completion for the given stage. See class comment for mode
  /// behavior. Throws ReplayMismatch on transcript drift and GatewayError when
  /// live transport fails after all retries.
  std::string complete(Stage stage, const std::vector<ChatMessage>& messages);

  /// Mark the most recent exchange as having needed the parse failsafe.
  void mark_fallback();

  /// Flush any buffered transcript line (also done on destruction).
  void finish();

  Mode mode() const;
  const ModelParams& params() const;
  int exchange_count() const;
  int fallback_count() const;
  const std::vector<CompletionExchange>& exchanges() const;

  /// Replay mode: exchanges not yet consumed.
  int remaining_replay() const;

private:
  struct State;
  explicit Gateway(std::unique_ptr<State> state);
  std::unique_ptr<State> state_;
};

/// Read a transcript file into memory (shared by replay mode and `verify`).
std::vector<CompletionExchange> load_transcript(const std::string& path);

}  // namespace ige::gateway
