#pragma once

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>

namespace bishopdisc {

/// 0 = errors only, 1 = warnings, 2 = info, 3 = debug. Read once from
/// BISHOPDISC_LOG, which accepts the numbers or error|warn|info|debug.
inline int log_level() {
  static const int level = [] {
    const char* v = std::getenv("BISHOPDISC_LOG");
    if (!v || !*v) return 1;
    const std::string s(v);
    if (s == "error") return 0;
    if (s == "warn" || s == "warning") return 1;
    if (s == "info") return 2;
    if (s == "debug" || s == "trace") return 3;
    try {
      return std::stoi(s);
    } catch (...) {
      return 1;
    }
  }();
  return level;
}

template <class... Args>
void log_at(int level, const Args&... args) {
  if (level > log_level()) return;
  static std::mutex mu;
  static const char* tags[] = {"error", "warn", "info", "debug"};
  std::ostringstream os;
  os << "[bishopdisc " << tags[level < 0 ? 0 : (level > 3 ? 3 : level)] << "] ";
  (os << ... << args);
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << os.str() << '\n';
}

template <class... Args>
void log_info(const Args&... args) {
  log_at(2, args...);
}

template <class... Args>
void log_debug(const Args&... args) {
  log_at(3, args...);
}

}  // namespace bishopdisc
