#include "mvn/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mvn {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

IniFile IniFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

IniFile IniFile::parse_text(const std::string& text) {
    IniFile ini;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        ini.data_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return ini;
}

bool IniFile::has(const std::string& section, const std::string& key) const {
    auto s = data_.find(section);
    return s != data_.end() && s->second.count(key) > 0;
}

std::string IniFile::get(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
    auto s = data_.find(section);
    if (s == data_.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const {
    const std::string v = get(section, key, "");
    return v.empty() ? fallback : std::stod(v);
}

long long IniFile::get_int(const std::string& section, const std::string& key,
                           long long fallback) const {
    const std::string v = get(section, key, "");
    return v.empty() ? fallback : std::stoll(v);
}

bool IniFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const std::string v = get(section, key, "");
    if (v.empty()) return fallback;
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw std::runtime_error("config: bad boolean value '" + v + "' for " + section + "." + key);
}

FlowRunConfig FlowRunConfig::from_ini(const IniFile& ini) {
    FlowRunConfig c;
    c.n = int(ini.get_int("grid", "n", c.n));
    c.length = ini.get_double("grid", "length", c.length);
    c.n_flow = int(ini.get_int("flow", "n_flow", c.n_flow));
    const std::string dt = ini.get("flow", "dt", "auto");
    c.dt = (dt == "auto" || dt.empty()) ? 0 : std::stod(dt);
    c.steps = int(ini.get_int("flow", "steps", c.steps));
    c.scheme = ini.get("flow", "scheme", c.scheme);
    c.dealias = ini.get_bool("flow", "dealias", c.dealias);
    c.ic_kind = ini.get("ic", "kind", c.ic_kind);
    c.amplitude = ini.get_double("ic", "amplitude", c.amplitude);
    c.seed = std::uint64_t(ini.get_int("ic", "seed", (long long)c.seed));
    c.mode = int(ini.get_int("ic", "mode", c.mode));
    c.kmax = int(ini.get_int("ic", "kmax", c.kmax));
    c.out_dir = ini.get("output", "dir", c.out_dir);
    c.snapshot_every = int(ini.get_int("output", "snapshot_every", c.snapshot_every));
    c.flux_every = int(ini.get_int("output", "flux_every", c.flux_every));
    return c;
}

void FlowRunConfig::validate() const {
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("config: grid n must be even >= 8");
    if (!(length > 0)) throw std::invalid_argument("config: grid length must be positive");
    if (n_flow != 1 && n_flow != 2) throw std::invalid_argument("config: n_flow must be 1 or 2");
    if (dt < 0) throw std::invalid_argument("config: dt must be positive or auto");
    if (steps < 0) throw std::invalid_argument("config: steps must be >= 0");
    if (scheme != "ifrk4" && scheme != "rk4")
        throw std::invalid_argument("config: scheme must be ifrk4 or rk4");
    if (ic_kind != "cosine" && ic_kind != "random_band" && ic_kind != "bump")
        throw std::invalid_argument("config: ic kind must be cosine, random_band or bump");
    if (!(amplitude > 0)) throw std::invalid_argument("config: ic amplitude must be positive");
    if (ic_kind == "cosine" && (mode < 1 || mode > n / 3))
        throw std::invalid_argument("config: cosine mode out of range");
    if (ic_kind == "random_band" && (kmax < 1 || kmax > n / 3))
        throw std::invalid_argument("config: random band kmax out of range");
    if (snapshot_every < 0 || flux_every < 0)
        throw std::invalid_argument("config: output cadences must be >= 0");
}

std::string FlowRunConfig::resolved_text(double dt_actual) const {
    char buf[1024];
    std::snprintf(buf, sizeof buf,
                  "[grid]\nn = %d\nlength = %.17g\n\n"
                  "[flow]\nn_flow = %d\ndt = %.17g\nsteps = %d\nscheme = %s\ndealias = %s\n\n"
                  "[ic]\nkind = %s\namplitude = %.17g\nseed = %llu\nmode = %d\nkmax = %d\n\n"
                  "[output]\ndir = %s\nsnapshot_every = %d\nflux_every = %d\n",
                  n, length, n_flow, dt_actual, steps, scheme.c_str(),
                  dealias ? "true" : "false", ic_kind.c_str(), amplitude,
                  (unsigned long long)seed, mode, kmax, out_dir.c_str(), snapshot_every,
                  flux_every);
    return buf;
}

}  // namespace mvn
