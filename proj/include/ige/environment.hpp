#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ige {

using Action = std::string;

/// Opaque serialized environment state. Snapshots are plain strings so archives
/// can be copied between threads or processes without sharing live objects.
using Snapshot = std::string;

/// The set of actions available in the current state. Enumerable environments
/// fill `actions` with every legal choice; free-form command environments also
/// fill it (with the commands that would change state right now) but set
/// `free_form` so agents are prompted with a command grammar instead of a
/// numbered list.
struct ActionSpace {
  bool free_form = false;
  std::vector<Action> actions;
  std::string grammar;  // human-readable command format, free-form only
};

/// Uniform contract for all benchmark tasks. Implementations must be fully
/// deterministic: a fixed construction seed plus a fixed action sequence always
/// yields the same observations and snapshots.
class Environment {
public:
  virtual ~Environment() = default;

  /// Return to the initial state. Costs nothing.
  virtual void reset() = 0;

  /// Text rendering of the current state. Must depend only on the underlying
  /// state, never on how it was reached.
  virtual std::string observation() const = 0;

  virtual ActionSpace valid_actions() const = 0;

  /// Apply one action and return the immediate feedback text. Every call
  /// counts as one environment operation. Throws std::logic_error if the
  /// current state is terminal.
  virtual std::string step(const Action& action) = 0;

  virtual Snapshot snapshot() const = 0;

  /// Restore a snapshot previously produced by this instance (same task, same
  /// seed). Costs nothing. Throws std::invalid_argument if the snapshot
  /// belongs to a different instance.
  virtual void restore(const Snapshot& snap) = 0;

  virtual bool is_terminal() const = 0;
  virtual bool is_success() const = 0;

  /// Actions applied since the last reset/restore point, as recorded in the
  /// current state.
  virtual int steps_taken() const = 0;

  /// Maximum trajectory length.
  virtual int horizon() const = 0;

  /// Optional progress metric of the current state. Environments without an
  /// incremental score return nullopt.
  virtual std::optional<double> score() const { return std::nullopt; }

  /// Safe command to fall back to when a free-form model response cannot be
  /// parsed. Enumerable environments return an empty string (callers pick a
  /// random valid action instead).
  virtual Action fallback_action() const { return {}; }

  /// Environment briefing shown to language-model agents. `with_examples`
  /// additionally includes worked solution traces where the task defines them.
  virtual std::string description(bool with_examples) const = 0;

  /// Fresh instance of the same task (same seed and parameters), reset to the
  /// initial state. Used for replay verification.
  virtual std::unique_ptr<Environment> clone_fresh() const = 0;

  /// Short identifier, e.g. "game24".
  virtual std::string name() const = 0;
};

}  // namespace ige
