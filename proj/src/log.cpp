#include "rollscan/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace rollscan::log {

namespace {

Level parse_level() {
    const char* env = std::getenv("ROLLSCAN_LOG");
    if (!env) return Level::Warn;
    if (std::strcmp(env, "error") == 0 || std::strcmp(env, "0") == 0) return Level::Error;
    if (std::strcmp(env, "warn") == 0 || std::strcmp(env, "1") == 0) return Level::Warn;
    if (std::strcmp(env, "info") == 0 || std::strcmp(env, "2") == 0) return Level::Info;
    if (std::strcmp(env, "debug") == 0 || std::strcmp(env, "3") == 0) return Level::Debug;
    return Level::Warn;
}

const char* tag(Level level) {
    switch (level) {
        case Level::Error: return "error";
        case Level::Warn: return "warn";
        case Level::Info: return "info";
        case Level::Debug: return "debug";
    }
    return "?";
}

std::mutex mutex;

}  // namespace

Level threshold() {
    static const Level level = parse_level();
    return level;
}

void message(Level level, const std::string& text) {
    if (level > threshold()) return;
    std::lock_guard lock(mutex);
    std::fprintf(stderr, "[rollscan %s] %s\n", tag(level), text.c_str());
}

}  // namespace rollscan::log
