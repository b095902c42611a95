#include "ige/selectors/backends.hpp"

#include "ige/gateway/parse.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ige::selectors {

namespace {

using gateway::PromptingMode;
using gateway::Stage;

std::vector<std::string> archive_observations(const Archive& archive) {
  std::vector<std::string> out;
  out.reserve(archive.size());
  for (const auto& e : archive.entries()) out.push_back(e.observation);
  return out;
}

std::vector<std::string> tried_list(const ArchiveEntry& entry) {
  return {entry.tried_actions.begin(), entry.tried_actions.end()};
}

void log_state(RunContext& ctx, int entry_id, bool fallback) {
  ctx.events.push_back({ctx.steps_used, "state_select", std::to_string(entry_id), "", fallback});
}

void log_action(RunContext& ctx, const Action& action, bool fallback) {
  ctx.events.push_back({ctx.steps_used, "action_select", action, "", fallback});
}

void log_verdict(RunContext& ctx, const ArchiveEntry& candidate, bool accepted, bool fallback) {
  ctx.events.push_back({ctx.steps_used, "filter_accept", candidate.observation,
                        accepted ? "accept" : "reject", fallback});
}

std::string run_fm_stage(FmSession& session, Stage stage, const gateway::StagePayload& payload) {
  gateway::PromptContext pc;
  pc.environment_description = session.environment_description;
  pc.mode = session.mode;
  pc.history = &session.history;
  auto messages = gateway::build_prompt(pc, payload);
  std::string response = session.gw->complete(stage, messages);
  session.history.add(gateway::stage_message(payload), response);
  return response;
}

}  // namespace

// --- State selection ------------------------------------------------------

int RandomStateSelector::select(RunContext& ctx) {
  int idx = ctx.rng.uniform_int(static_cast<int>(ctx.archive.size()));
  int id = ctx.archive.at_index(static_cast<std::size_t>(idx)).entry_id;
  ctx.archive.note_selected(id);
  log_state(ctx, id, false);
  return id;
}

std::vector<double> ClassicStateSelector::weights(const Archive& archive) {
  std::vector<double> w;
  w.reserve(archive.size());
  for (const auto& e : archive.entries()) w.push_back(1.0 / (e.visit_count + 1));
  return w;
}

int ClassicStateSelector::select(RunContext& ctx) {
  int idx = ctx.rng.weighted_index(weights(ctx.archive));
  int id = ctx.archive.at_index(static_cast<std::size_t>(idx)).entry_id;
  ctx.archive.note_selected(id);
  log_state(ctx, id, false);
  return id;
}

int FmStateSelector::select(RunContext& ctx) {
  const int n = static_cast<int>(ctx.archive.size());
  if (n == 1) {
    int id = ctx.archive.at_index(0).entry_id;
    ctx.archive.note_selected(id);
    log_state(ctx, id, false);
    return id;
  }
  gateway::StateSelectPayload payload{archive_observations(ctx.archive)};
  std::string response = run_fm_stage(*session_, Stage::state_select, payload);
  auto idx = gateway::parse_choice(response, n,
                                   session_->mode == PromptingMode::chain_of_thought);
  bool fallback = !idx.has_value();
  if (fallback) {
    session_->gw->mark_fallback();
    idx = ctx.rng.uniform_int(n);
  }
  int id = ctx.archive.at_index(static_cast<std::size_t>(*idx)).entry_id;
  ctx.archive.note_selected(id);
  log_state(ctx, id, fallback);
  return id;
}

// --- Action selection -----------------------------------------------------

Action RandomActionSelector::select(const ArchiveEntry&, const ActionSpace& space,
                                    RunContext& ctx) {
  if (space.actions.empty()) throw std::logic_error("action selection on an empty action space");
  Action action = space.actions[static_cast<std::size_t>(
      ctx.rng.uniform_int(static_cast<int>(space.actions.size())))];
  log_action(ctx, action, false);
  return action;
}

Action FmActionSelector::select(const ArchiveEntry& root, const ActionSpace& space,
                                RunContext& ctx) {
  if (space.actions.empty()) throw std::logic_error("action selection on an empty action space");
  const bool cot = session_->mode == PromptingMode::chain_of_thought;

  gateway::ActionSelectPayload payload;
  payload.current_observation = root.observation;
  payload.include_history_section = ctx.toggles.use_action_history;
  if (ctx.toggles.use_action_history) payload.tried_actions = tried_list(root);
  payload.free_form = space.free_form;

  if (!space.free_form) {
    if (space.actions.size() == 1) {
      log_action(ctx, space.actions[0], false);
      return space.actions[0];
    }
    payload.options = space.actions;
    std::string response = run_fm_stage(*session_, Stage::action_select, payload);
    auto idx = gateway::parse_choice(response, static_cast<int>(space.actions.size()), cot);
    bool fallback = !idx.has_value();
    if (fallback) {
      session_->gw->mark_fallback();
      idx = ctx.rng.uniform_int(static_cast<int>(space.actions.size()));
    }
    Action action = space.actions[static_cast<std::size_t>(*idx)];
    log_action(ctx, action, fallback);
    return action;
  }

  std::string response = run_fm_stage(*session_, Stage::action_select, payload);
  auto command = gateway::parse_command(response);
  bool fallback = !command.has_value();
  if (fallback) {
    session_->gw->mark_fallback();
    command = ctx.env.fallback_action();
  }
  log_action(ctx, *command, fallback);
  return *command;
}

// --- Archive filtering ----------------------------------------------------

bool AcceptAllFilter::accept(const ArchiveEntry& candidate, RunContext& ctx) {
  log_verdict(ctx, candidate, true, false);
  return true;
}

bool FmAcceptanceFilter::accept(const ArchiveEntry& candidate, RunContext& ctx) {
  gateway::FilterAcceptPayload payload;
  payload.archive_observations = archive_observations(ctx.archive);
  payload.candidate_observation = candidate.observation;
  std::string response = run_fm_stage(*session_, Stage::filter_accept, payload);
  auto choice = gateway::parse_choice(response, 2,
                                      session_->mode == PromptingMode::chain_of_thought);
  bool fallback = !choice.has_value();
  // Malformed verdicts default to keeping the state.
  bool accepted = fallback ? true : (*choice == 1);
  if (fallback) session_->gw->mark_fallback();
  log_verdict(ctx, candidate, accepted, fallback);
  return accepted;
}

bool FmRejectionFilter::accept(const ArchiveEntry& candidate, RunContext& ctx) {
  log_verdict(ctx, candidate, true, false);
  return true;
}

void FmRejectionFilter::post_rollout(RunContext& ctx) {
  if (ctx.archive.size() <= 1) return;

  gateway::FilterRejectPayload payload{archive_observations(ctx.archive)};
  std::string response = run_fm_stage(*session_, Stage::filter_reject, payload);
  auto listed = gateway::parse_removal_list(response);
  if (!listed) {
    session_->gw->mark_fallback();
    ctx.events.push_back({ctx.steps_used, "filter_reject", "[]", "", true});
    return;
  }

  const int n = static_cast<int>(ctx.archive.size());
  std::set<int> removal_ids;
  for (int idx : *listed) {
    if (idx < 0 || idx >= n) {
      ctx.events.push_back({ctx.steps_used, "warning",
                            "filter_reject: index " + std::to_string(idx) + " out of range", "",
                            false});
      continue;
    }
    const ArchiveEntry& entry = ctx.archive.at_index(static_cast<std::size_t>(idx));
    if (entry.success_terminal) continue;  // success states are never dropped
    removal_ids.insert(entry.entry_id);
  }

  if (removal_ids.size() >= ctx.archive.size()) {
    int keep = ctx.archive.most_recent().entry_id;
    removal_ids.erase(keep);
    ctx.events.push_back({ctx.steps_used, "warning",
                          "filter_reject: retained most recent entry " + std::to_string(keep), "",
                          false});
  }

  std::ostringstream removed;
  removed << '[';
  bool first = true;
  for (int id : removal_ids) {
    if (!first) removed << ',';
    removed << id;
    first = false;
  }
  removed << ']';

  if (!removal_ids.empty()) {
    ctx.archive.remove_ids({removal_ids.begin(), removal_ids.end()});
  }
  ctx.events.push_back({ctx.steps_used, "filter_reject", removed.str(), "", false});
}

SelectorBackends make_fm_backends(const std::shared_ptr<FmSession>& session,
                                  bool rejection_filter) {
  SelectorBackends b;
  b.state = std::make_shared<FmStateSelector>(session);
  b.action = std::make_shared<FmActionSelector>(session);
  if (rejection_filter) {
    b.filter = std::make_shared<FmRejectionFilter>(session);
  } else {
    b.filter = std::make_shared<FmAcceptanceFilter>(session);
  }
  return b;
}

SelectorBackends make_random_backends() {
  SelectorBackends b;
  b.state = std::make_shared<RandomStateSelector>();
  b.action = std::make_shared<RandomActionSelector>();
  b.filter = std::make_shared<AcceptAllFilter>();
  return b;
}

}  // namespace ige::selectors
