#pragma once

// Sectioned `key = value` run configuration ('#' starts a comment).

#include <cstdint>
#include <map>
#include <string>

#include "mvn/field.hpp"

namespace mvn {

class IniFile {
  public:
    static IniFile parse_file(const std::string& path);
    static IniFile parse_text(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long long get_int(const std::string& section, const std::string& key,
                      long long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  private:
    std::map<std::string, std::map<std::string, std::string>> data_;
};

struct FlowRunConfig {
    // [grid]
    int n = 64;
    double length = two_pi;
    // [flow]
    int n_flow = 1;
    double dt = 0;  // 0 = heuristic default
    int steps = 0;
    std::string scheme = "ifrk4";
    bool dealias = true;
    // [ic]
    std::string ic_kind = "cosine";  // cosine | random_band | bump
    double amplitude = 0.1;
    std::uint64_t seed = 1;
    int mode = 1;  // cosine mode number
    int kmax = 4;  // random band limit
    // [output]
    std::string out_dir = "out";
    int snapshot_every = 0;  // 0: first and last only
    int flux_every = 0;      // 0: never

    static FlowRunConfig from_ini(const IniFile& ini);
    void validate() const;
    std::string resolved_text(double dt_actual) const;
};

}  // namespace mvn
