#pragma once

#include <atomic>
#include <iostream>
#include <mutex>
#include <string_view>

namespace debate {

enum class LogLevel { quiet = 0, warn = 1, info = 2 };

inline std::atomic<LogLevel>& log_level() {
  static std::atomic<LogLevel> level{LogLevel::warn};
  return level;
}

inline void log_line(LogLevel level, std::string_view tag, std::string_view msg) {
  if (static_cast<int>(level) > static_cast<int>(log_level().load())) return;
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::clog << "[" << tag << "] " << msg << '\n';
}

inline void log_warn(std::string_view msg) { log_line(LogLevel::warn, "warn", msg); }
inline void log_info(std::string_view msg) { log_line(LogLevel::info, "info", msg); }

}  // namespace debate
