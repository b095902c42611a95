#pragma once

#include <set>
#include <string>
#include <vector>

#include "ige/environment.hpp"

namespace ige {

/// One archived state: everything needed to restore it, re-derive it from
/// reset, and account for how exploration has treated it.
struct ArchiveEntry {
  int entry_id = 0;
  std::string observation;
  Snapshot snapshot;
  std::vector<Action> trajectory;   // actions from reset to this state
  std::set<Action> tried_actions;   // actions applied while this was the expansion root
  int visit_count = 0;              // times returned by state selection
  int discovery_step = 0;           // global operation count when discovered
  bool success_terminal = false;
};

/// Ordered collection of archived states. Ids are assigned at append time and
/// stay stable when other entries are filtered out. Never empty once
/// initialized: removal of the last remaining entry is refused.
class Archive {
public:
  int append(ArchiveEntry entry);  // assigns and returns the entry id

  bool has(int entry_id) const;
  ArchiveEntry& at(int entry_id);
  const ArchiveEntry& at(int entry_id) const;

  /// Position-based access in insertion order (prompt listing order).
  ArchiveEntry& at_index(std::size_t index) { return entries_.at(index); }
  const ArchiveEntry& at_index(std::size_t index) const { return entries_.at(index); }

  std::size_t size() const { return entries_.size(); }
  const std::vector<ArchiveEntry>& entries() const { return entries_; }

  /// Mark an entry as chosen by state selection and return it.
  ArchiveEntry& note_selected(int entry_id);

  /// Remove the given ids. Unknown ids are ignored. Throws std::logic_error
  /// if the removal would empty the archive.
  void remove_ids(const std::vector<int>& ids);

  /// Entry with the highest discovery_step (insertion order breaks ties).
  const ArchiveEntry& most_recent() const;

private:
  std::vector<ArchiveEntry> entries_;
  int next_id_ = 0;
};

/// Build the initial archive for a freshly reset environment: exactly one
/// entry holding the initial observation and snapshot with an empty trajectory.
Archive init_archive(const Environment& env);

}  // namespace ige
