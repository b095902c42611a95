#pragma once

#include <string>
#include <vector>

#include "ige/archive.hpp"
#include "ige/environment.hpp"

namespace ige {

struct ReachabilityIssue {
  int entry_id = 0;
  std::string detail;
};

/// Independent check that every archived entry is honest: replaying its
/// trajectory from reset on a fresh instance must land exactly on the stored
/// observation and snapshot. Returns one issue per failing entry (empty means
/// the archive passed).
std::vector<ReachabilityIssue> verify_archive_reachability(const Archive& archive,
                                                           const Environment& reference);

}  // namespace ige
