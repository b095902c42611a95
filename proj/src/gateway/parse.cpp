#include "ige/gateway/parse.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "json.hpp"

namespace ige::gateway {

namespace {

using nlohmann::json;

/// Balanced top-level JSON object starting at `start` (which must point at a
/// '{'), honoring string literals and escapes. Returns the substring or
/// nullopt when unbalanced.
std::optional<std::string> balanced_object(const std::string& text, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      --depth;
      if (depth == 0) return text.substr(start, i - start + 1);
    }
  }
  return std::nullopt;
}

/// First parseable JSON object in the text that owns every required key.
std::optional<json> find_object(const std::string& text,
                                const std::vector<std::string>& required_keys) {
  for (std::size_t pos = text.find('{'); pos != std::string::npos;
       pos = text.find('{', pos + 1)) {
    auto span = balanced_object(text, pos);
    if (!span) continue;
    json parsed = json::parse(*span, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) continue;
    bool ok = true;
    for (const auto& key : required_keys) {
      if (!parsed.contains(key)) {
        ok = false;
        break;
      }
    }
    if (ok) return parsed;
  }
  return std::nullopt;
}

std::optional<int> coerce_int(const json& value) {
  if (value.is_number_integer() || value.is_number_unsigned()) {
    return value.get<int>();
  }
  if (value.is_number_float()) {
    double d = value.get<double>();
    if (d == std::floor(d)) return static_cast<int>(d);
    return std::nullopt;
  }
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s.empty()) return std::nullopt;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return std::nullopt;
    for (std::size_t k = i; k < s.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(s[k]))) return std::nullopt;
    }
    return std::atoi(s.c_str());
  }
  return std::nullopt;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::optional<int> parse_choice(const std::string& text, int n_options, bool expects_thought) {
  std::vector<std::string> required{"choice"};
  if (expects_thought) required.push_back("thought");
  auto obj = find_object(text, required);
  if (!obj) return std::nullopt;
  auto value = coerce_int(obj->at("choice"));
  if (!value || *value < 0 || *value >= n_options) return std::nullopt;
  return value;
}

std::optional<std::string> parse_command(const std::string& text) {
  // Mirrors the convention "> (.*?)" terminated by a period or end of line:
  // the first marker wins and the capture stops at '.', '\n', or end of text.
  std::size_t pos = text.find("> ");
  if (pos == std::string::npos) return std::nullopt;
  std::size_t start = pos + 2;
  std::size_t end = start;
  while (end < text.size() && text[end] != '.' && text[end] != '\n') ++end;
  std::string command = trim(text.substr(start, end - start));
  if (command.empty()) return std::nullopt;
  return command;
}

std::optional<std::vector<int>> parse_removal_list(const std::string& text) {
  auto obj = find_object(text, {"remove"});
  if (!obj) return std::nullopt;
  const auto& arr = obj->at("remove");
  if (!arr.is_array()) return std::nullopt;
  std::vector<int> ids;
  for (const auto& item : arr) {
    auto value = coerce_int(item);
    if (!value) return std::nullopt;
    ids.push_back(*value);
  }
  return ids;
}

}  // namespace ige::gateway
