#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace itrd::cli {

enum class LogLevel { error = 0, info = 1, debug = 2 };

// Verbosity comes from ITRD_LOG={error|info|debug}; unset means error.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("ITRD_LOG");
    if (env == nullptr) return LogLevel::error;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    return LogLevel::error;
  }();
  return level;
}

template <typename... Args>
void log_at(LogLevel lvl, const char* tag, const char* fmt, Args... args) {
  if (static_cast<int>(log_level()) < static_cast<int>(lvl)) return;
  std::fprintf(stderr, "[%s] ", tag);
  std::fprintf(stderr, fmt, args...);  // NOLINT: fmt is always a literal below
  std::fputc('\n', stderr);
}

template <typename... Args>
void log_info(const char* fmt, Args... args) {
  log_at(LogLevel::info, "info", fmt, args...);
}

template <typename... Args>
void log_debug(const char* fmt, Args... args) {
  log_at(LogLevel::debug, "debug", fmt, args...);
}

inline void log_error(const char* msg) { std::fprintf(stderr, "[error] %s\n", msg); }

}  // namespace itrd::cli
