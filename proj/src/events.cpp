#include "ige/events.hpp"

#include <sstream>

#include "json.hpp"

namespace ige {

using ordered_json = nlohmann::ordered_json;

std::string to_jsonl(const EventLog& log) {
  std::string out;
  for (const Event& e : log) {
    ordered_json j;
    j["step"] = e.step;
    j["stage"] = e.stage;
    j["choice"] = e.choice;
    j["verdict"] = e.verdict;
    j["fallback"] = e.fallback;
    out += j.dump();
    out += '\n';
  }
  return out;
}

EventLog event_log_from_jsonl(const std::string& text) {
  EventLog log;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line);
    Event e;
    e.step = j.at("step").get<int>();
    e.stage = j.at("stage").get<std::string>();
    e.choice = j.at("choice").get<std::string>();
    e.verdict = j.at("verdict").get<std::string>();
    e.fallback = j.at("fallback").get<bool>();
    log.push_back(std::move(e));
  }
  return log;
}

int count_fallbacks(const EventLog& log) {
  int n = 0;
  for (const Event& e : log) {
    if (e.fallback) ++n;
  }
  return n;
}

}  // namespace ige
