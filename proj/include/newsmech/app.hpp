#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace newsmech {

inline constexpr const char* kResultSchema = "newsmech.result/1";
inline constexpr const char* kAuditSchema = "newsmech.audit/1";
inline constexpr int kAuditFailureExit = 4;

// Flat `key = value` lines; `#` starts a comment.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);
    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string str(const std::string& key, const std::string& fallback) const;
    double num(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::vector<double> list(const std::string& key) const;
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

struct RunOptions {
    int grid_size = 201;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    std::string timeline = "all";
};

// Everything a run produces, kept in memory until the run has succeeded.
struct Artifacts {
    nlohmann::ordered_json result;
    std::map<std::string, std::string> tables;  // file name -> csv text
    bool audit_pass = true;
};

// Reads grid_size, tolerance, seed and timeline from the config.
RunOptions options_from_config(const Config& cfg);

Artifacts run_scenario(const Config& cfg, const RunOptions& opt);
Artifacts sweep_scenario(const Config& cfg, const RunOptions& opt);

// Replays the oracle audits on a stored result document.
nlohmann::ordered_json audit_result(const nlohmann::ordered_json& result);

int cli_main(int argc, char** argv);

}  // namespace newsmech
