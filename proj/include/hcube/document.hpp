#pragma once

// Self-describing run documents and the on-disk result cache.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "hcube/config.hpp"
#include "hcube/dyadic.hpp"
#include "hcube/sampling.hpp"

namespace hcube {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

/// FNV-1a, 64 bit, as 16 hex digits.
inline std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string code_version_hash() {
    return fnv1a_hex(std::string("hcube ") + version + " schema " + std::to_string(schema_version));
}

inline json exact_value(const Dyadic& x) { return {{"exact", x.to_string()}, {"approx", x.to_double()}}; }

inline json exact_value(const Rational& x) {
    std::ostringstream s;
    s << numerator(x) << "/" << denominator(x);
    return {{"exact", s.str()}, {"approx", x.convert_to<double>()}};
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point t = std::chrono::system_clock::now()) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunDocument {
    std::string command;
    json config = json::object();
    json payload = json::object();
    std::string status = "ok";  // ok | failed | error
    std::string cache = "off";  // off | hit | miss
    std::string started_at;
    std::string finished_at;

    json to_json() const {
        return {{"schema_version", schema_version}, {"command", command},      {"status", status},
                {"config", config},                 {"code_version", code_version_hash()},
                {"cache", cache},                   {"started_at", started_at}, {"finished_at", finished_at},
                {"payload", payload}};
    }

    static RunDocument from_json(const json& j) {
        if (j.at("schema_version").get<int>() != schema_version)
            throw precondition_error("unsupported document schema version");
        RunDocument doc;
        doc.command = j.at("command").get<std::string>();
        doc.status = j.at("status").get<std::string>();
        doc.config = j.at("config");
        doc.cache = j.at("cache").get<std::string>();
        doc.started_at = j.at("started_at").get<std::string>();
        doc.finished_at = j.at("finished_at").get<std::string>();
        doc.payload = j.at("payload");
        return doc;
    }
};

/// One file per (command kind, d, engine), content-addressed by the config hash.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    /// --cache-dir wins over the HCUBE_CACHE_DIR environment variable.
    static std::optional<ResultCache> open(const std::string& flag) {
        std::string dir = flag;
        if (dir.empty())
            if (const char* env = std::getenv("HCUBE_CACHE_DIR")) dir = env;
        if (dir.empty()) return std::nullopt;
        return ResultCache(dir);
    }

    static std::string key(const std::string& kind, const json& config) {
        return fnv1a_hex(kind + "\n" + config.dump() + "\n" + code_version_hash());
    }

    std::filesystem::path path(const std::string& kind, int d, const std::string& engine,
                               const json& config) const {
        return dir_ / (kind + "-d" + std::to_string(d) + "-" + engine + "-" + key(kind, config) + ".json");
    }

    std::optional<json> load(const std::string& kind, int d, const std::string& engine, const json& config) const {
        std::ifstream in(path(kind, d, engine, config));
        if (!in) return std::nullopt;
        try {
            return json::parse(in);
        } catch (const json::parse_error&) {
            return std::nullopt;
        }
    }

    void store(const std::string& kind, int d, const std::string& engine, const json& config,
               const json& payload) const {
        std::filesystem::create_directories(dir_);
        const auto target = path(kind, d, engine, config);
        const auto tmp = target.string() + ".tmp";
        {
            std::ofstream out(tmp);
            out << payload.dump() << "\n";
        }
        std::filesystem::rename(tmp, target);
    }

private:
    std::filesystem::path dir_;
};

} // namespace hcube
