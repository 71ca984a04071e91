#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace conic::log {

enum class Level { Off = 0, Warn = 1, Info = 2, Debug = 3 };

// Verbosity from CONIC_CDS_LOG ("off"|"warn"|"info"|"debug" or 0..3).
// Defaults to Warn so data-quality warnings are visible.
inline Level level() {
    static const Level lvl = [] {
        const char* env = std::getenv("CONIC_CDS_LOG");
        if (env == nullptr || *env == '\0') return Level::Warn;
        if (std::strcmp(env, "off") == 0 || std::strcmp(env, "0") == 0) return Level::Off;
        if (std::strcmp(env, "warn") == 0 || std::strcmp(env, "1") == 0) return Level::Warn;
        if (std::strcmp(env, "info") == 0 || std::strcmp(env, "2") == 0) return Level::Info;
        if (std::strcmp(env, "debug") == 0 || std::strcmp(env, "3") == 0) return Level::Debug;
        return Level::Warn;
    }();
    return lvl;
}

template <typename... Args>
void emit(Level lvl, const char* tag, const char* fmt, Args... args) {
    if (static_cast<int>(lvl) > static_cast<int>(level())) return;
    std::fprintf(stderr, "[%s] ", tag);
    if constexpr (sizeof...(Args) == 0) {
        std::fputs(fmt, stderr);
    } else {
        std::fprintf(stderr, fmt, args...);
    }
    std::fputc('\n', stderr);
}

template <typename... Args>
void warn(const char* fmt, Args... args) {
    emit(Level::Warn, "warn", fmt, args...);
}

template <typename... Args>
void info(const char* fmt, Args... args) {
    emit(Level::Info, "info", fmt, args...);
}

template <typename... Args>
void debug(const char* fmt, Args... args) {
    emit(Level::Debug, "debug", fmt, args...);
}

} // namespace conic::log
