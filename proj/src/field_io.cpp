#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mvn/field.hpp"

namespace mvn {

namespace {

void write_header(std::FILE* fp, const Grid& g, const char* kind) {
    std::fprintf(fp, "# n=%d length=%.17g kind=%s\n", g.n, g.length, kind);
}

struct Header {
    int n = 0;
    double length = 0;
    std::string kind;
};

Header parse_header(const std::string& line, const std::string& path) {
    Header h;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok != "#") throw std::runtime_error(path + ": missing field header");
    while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "n")
            h.n = std::stoi(val);
        else if (key == "length")
            h.length = std::stod(val);
        else if (key == "kind")
            h.kind = val;
    }
    if (h.n <= 0 || !(h.length > 0) || h.kind.empty())
        throw std::runtime_error(path + ": malformed field header");
    return h;
}

}  // namespace

void write_field(const std::string& path, const ComplexField& f) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path + " for writing");
    write_header(fp, f.grid, "complex");
    for (const cplx& z : f.v) std::fprintf(fp, "%.17g %.17g\n", z.real(), z.imag());
    std::fclose(fp);
}

void write_field(const std::string& path, const RealField& f) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path + " for writing");
    write_header(fp, f.grid, "real");
    for (double x : f.v) std::fprintf(fp, "%.17g\n", x);
    std::fclose(fp);
}

ComplexField read_complex_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    Header h = parse_header(line, path);
    ComplexField f(make_grid(h.n, h.length));
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        double re = 0, im = 0;
        in >> re;
        if (h.kind == "complex") in >> im;
        if (!in) throw std::runtime_error(path + ": truncated field data");
        f.v[i] = {re, im};
    }
    return f;
}

RealField read_real_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    Header h = parse_header(line, path);
    if (h.kind != "real") throw std::runtime_error(path + ": expected kind=real");
    RealField f(make_grid(h.n, h.length));
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        in >> f.v[i];
        if (!in) throw std::runtime_error(path + ": truncated field data");
    }
    return f;
}

}  // namespace mvn
