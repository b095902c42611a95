#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ige::gateway {

/// Extract an index choice from a model response. The response may wrap the
/// JSON object in prose; the first well-formed object wins. Returns nullopt
/// (caller falls back to the failsafe) when no object parses, the choice is
/// missing or non-integer, it lies outside [0, n_options), or a required
/// thought field is absent in chain-of-thought mode.
std::optional<int> parse_choice(const std::string& text, int n_options, bool expects_thought);

/// Extract a free-form command of the form "> command", terminated by a period
/// or end of line. The first match wins; surrounding reasoning is ignored.
std::optional<std::string> parse_command(const std::string& text);

/// Extract a removal list {"remove": [i, ...]} from a rejection-filter
/// response. Returns nullopt on malformed output (callers keep the archive
/// unchanged).
std::optional<std::vector<int>> parse_removal_list(const std::string& text);

}  // namespace ige::gateway
