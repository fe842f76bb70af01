#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace pacsafe {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Log level comes from the PAC_CERT_LOG environment variable
// (error|warn|info|debug); default is warn.  Read once per process.
inline LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("PAC_CERT_LOG");
    if (env == nullptr) return LogLevel::kWarn;
    if (std::strcmp(env, "error") == 0) return LogLevel::kError;
    if (std::strcmp(env, "info") == 0) return LogLevel::kInfo;
    if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
    return LogLevel::kWarn;
  }();
  return level;
}

inline void log_msg(LogLevel lvl, const std::string& msg) {
  if (static_cast<int>(lvl) > static_cast<int>(log_level())) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "[pacsafe %s] %s\n", names[static_cast<int>(lvl)],
               msg.c_str());
}

inline void log_error(const std::string& m) { log_msg(LogLevel::kError, m); }
inline void log_warn(const std::string& m) { log_msg(LogLevel::kWarn, m); }
inline void log_info(const std::string& m) { log_msg(LogLevel::kInfo, m); }
inline void log_debug(const std::string& m) { log_msg(LogLevel::kDebug, m); }

}  // namespace pacsafe
