#include "lmmbic/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace lmmbic::log {

namespace {
std::atomic<Level> g_level{Level::kWarn};
std::mutex g_mutex;

std::string_view name(Level level) {
    switch (level) {
        case Level::kError: return "error";
        case Level::kWarn: return "warn";
        case Level::kInfo: return "info";
        case Level::kDebug: return "debug";
    }
    return "?";
}
}  // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

void write(Level lvl, std::string_view message) {
    if (lvl > g_level.load()) return;
    const std::lock_guard lock(g_mutex);
    std::cerr << "[lmmbic] " << name(lvl) << ": " << message << '\n';
}

}  // namespace lmmbic::log
