#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ige/gateway/gateway.hpp"
#include "ige/gateway/prompts.hpp"
#include "ige/selectors/interfaces.hpp"

namespace ige::selectors {

/// Shared per-run context for model-driven backends: one gateway plus the
/// prompt configuration and rolling history all stages feed.
struct FmSession {
  gateway::Gateway* gw = nullptr;
  std::string environment_description;
  gateway::PromptingMode mode = gateway::PromptingMode::zero_shot;
  gateway::PromptHistory history;

  FmSession(gateway::Gateway* g, std::string description, gateway::PromptingMode m,
            std::size_t history_cap)
      : gw(g), environment_description(std::move(description)), mode(m), history(history_cap) {}
};

// --- State selection ------------------------------------------------------

/// Uniform draw over the archive.
class RandomStateSelector final : public StateSelector {
public:
  int select(RunContext& ctx) override;
};

/// Count-based curiosity weighting: probability proportional to
/// 1 / (visit_count + 1).
class ClassicStateSelector final : public StateSelector {
public:
  int select(RunContext& ctx) override;
  static std::vector<double> weights(const Archive& archive);
};

/// Model-driven choice over the numbered archive listing. Falls back to a
/// uniform draw on malformed output; a single-entry archive short-circuits
/// without a gateway call.
class FmStateSelector final : public StateSelector {
public:
  explicit FmStateSelector(std::shared_ptr<FmSession> session) : session_(std::move(session)) {}
  int select(RunContext& ctx) override;

private:
  std::shared_ptr<FmSession> session_;
};

// --- Action selection -----------------------------------------------------

/// Uniform draw over the currently valid actions.
class RandomActionSelector final : public ActionSelector {
public:
  Action select(const ArchiveEntry& root, const ActionSpace& space, RunContext& ctx) override;
};

/// Model-driven action choice. Enumerable spaces use the numbered-choice
/// format with a uniform-random fallback; free-form spaces use the
/// "> command" format with the environment's safe fallback command.
class FmActionSelector final : public ActionSelector {
public:
  explicit FmActionSelector(std::shared_ptr<FmSession> session) : session_(std::move(session)) {}
  Action select(const ArchiveEntry& root, const ActionSpace& space, RunContext& ctx) override;

private:
  std::shared_ptr<FmSession> session_;
};

// --- Archive filtering ----------------------------------------------------

/// No filtering: every discovered state is archived.
class AcceptAllFilter final : public ArchiveFilter {
public:
  bool accept(const ArchiveEntry& candidate, RunContext& ctx) override;
};

/// Model-judged acceptance: each new state is kept only when the model deems
/// it interestingly new. Malformed output defaults to accept.
class FmAcceptanceFilter final : public ArchiveFilter {
public:
  explicit FmAcceptanceFilter(std::shared_ptr<FmSession> session) : session_(std::move(session)) {}
  bool accept(const ArchiveEntry& candidate, RunContext& ctx) override;

private:
  std::shared_ptr<FmSession> session_;
};

/// Add-then-prune filtering: every state is archived during the rollout, then
/// the model names entries to drop. Never empties the archive and never drops
/// a success state; out-of-range indices are ignored with a logged warning.
class FmRejectionFilter final : public ArchiveFilter {
public:
  explicit FmRejectionFilter(std::shared_ptr<FmSession> session) : session_(std::move(session)) {}
  bool accept(const ArchiveEntry& candidate, RunContext& ctx) override;
  void post_rollout(RunContext& ctx) override;
  bool rejection_mode() const override { return true; }

private:
  std::shared_ptr<FmSession> session_;
};

/// Fully model-driven backends sharing one session.
SelectorBackends make_fm_backends(const std::shared_ptr<FmSession>& session,
                                  bool rejection_filter = false);

/// Uninformed baseline backends: random state, random action, archive all.
SelectorBackends make_random_backends();

}  // namespace ige::selectors
