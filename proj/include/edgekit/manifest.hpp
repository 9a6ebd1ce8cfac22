#pragma once

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <string>

#include "json.hpp"

namespace edgekit {

inline constexpr const char* kVersion = "1.0.0";

/// Reproducibility record embedded in every report: the command and its fully
/// resolved parameters. `timestamp` is the only field allowed to differ
/// between two runs with identical inputs.
struct RunManifest {
    std::string command;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::string timestamp = utc_now();

    nlohmann::ordered_json to_json() const {
        return {{"tool", "edgekit"},
                {"version", kVersion},
                {"command", command},
                {"timestamp", timestamp},
                {"parameters", parameters}};
    }

    /// ISO-8601 UTC. Honors SOURCE_DATE_EPOCH for reproducible output.
    static std::string utc_now() {
        std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
            char* end = nullptr;
            const long long v = std::strtoll(epoch, &end, 10);
            if (end && *end == '\0' && end != epoch) t = static_cast<std::time_t>(v);
        }
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }
};

}  // namespace edgekit
