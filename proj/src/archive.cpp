#include "ige/archive.hpp"

#include <algorithm>
#include <stdexcept>

namespace ige {

int Archive::append(ArchiveEntry entry) {
  entry.entry_id = next_id_++;
  entries_.push_back(std::move(entry));
  return entries_.back().entry_id;
}

bool Archive::has(int entry_id) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [entry_id](const ArchiveEntry& e) { return e.entry_id == entry_id; });
}

ArchiveEntry& Archive::at(int entry_id) {
  for (auto& e : entries_) {
    if (e.entry_id == entry_id) return e;
  }
  throw std::out_of_range("Archive::at: no entry with id " + std::to_string(entry_id));
}

const ArchiveEntry& Archive::at(int entry_id) const {
  return const_cast<Archive*>(this)->at(entry_id);
}

ArchiveEntry& Archive::note_selected(int entry_id) {
  ArchiveEntry& e = at(entry_id);
  e.visit_count += 1;
  return e;
}

void Archive::remove_ids(const std::vector<int>& ids) {
  auto listed = [&ids](int id) { return std::find(ids.begin(), ids.end(), id) != ids.end(); };
  std::size_t kept = 0;
  for (const auto& e : entries_) {
    if (!listed(e.entry_id)) ++kept;
  }
  if (kept == 0 && !entries_.empty()) {
    throw std::logic_error("Archive::remove_ids: refusing to remove the last entry");
  }
  entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                [&listed](const ArchiveEntry& e) { return listed(e.entry_id); }),
                 entries_.end());
}

const ArchiveEntry& Archive::most_recent() const {
  if (entries_.empty()) throw std::logic_error("Archive::most_recent: archive is empty");
  const ArchiveEntry* best = &entries_.front();
  for (const auto& e : entries_) {
    if (e.discovery_step >= best->discovery_step) best = &e;
  }
  return *best;
}

Archive init_archive(const Environment& env) {
  if (env.steps_taken() != 0) {
    throw std::invalid_argument("init_archive: environment must be freshly reset");
  }
  Archive archive;
  ArchiveEntry first;
  first.observation = env.observation();
  first.snapshot = env.snapshot();
  first.success_terminal = env.is_success();
  archive.append(std::move(first));
  return archive;
}

}  // namespace ige
