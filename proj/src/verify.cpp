#include "ige/verify.hpp"

namespace ige {

std::vector<ReachabilityIssue> verify_archive_reachability(const Archive& archive,
                                                           const Environment& reference) {
  std::vector<ReachabilityIssue> issues;
  for (const auto& entry : archive.entries()) {
    auto probe = reference.clone_fresh();
    probe->reset();
    bool applied = true;
    for (const auto& action : entry.trajectory) {
      if (probe->is_terminal()) {
        issues.push_back({entry.entry_id, "trajectory continues past a terminal state"});
        applied = false;
        break;
      }
      try {
        probe->step(action);
      } catch (const std::exception& ex) {
        issues.push_back({entry.entry_id, std::string("trajectory replay failed: ") + ex.what()});
        applied = false;
        break;
      }
    }
    if (!applied) continue;
    if (probe->observation() != entry.observation) {
      issues.push_back({entry.entry_id, "replayed observation differs from the archived one"});
    } else if (probe->snapshot() != entry.snapshot) {
      issues.push_back({entry.entry_id, "replayed snapshot differs from the archived one"});
    } else if (probe->is_success() != entry.success_terminal) {
      issues.push_back({entry.entry_id, "success flag does not match the replayed state"});
    }
  }
  return issues;
}

}  // namespace ige
