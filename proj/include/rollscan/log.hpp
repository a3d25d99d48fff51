#pragma once

#include <string>

namespace rollscan::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Threshold from ROLLSCAN_LOG ("error", "warn", "info", "debug" or 0-3);
/// defaults to warn.
Level threshold();

void message(Level level, const std::string& text);

inline void error(const std::string& text) { message(Level::Error, text); }
inline void warn(const std::string& text) { message(Level::Warn, text); }
inline void info(const std::string& text) { message(Level::Info, text); }
inline void debug(const std::string& text) { message(Level::Debug, text); }

}  // namespace rollscan::log
