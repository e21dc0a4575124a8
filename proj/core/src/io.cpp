#include "mfou/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace mfou {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& file) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw IoError("cannot open " + file + " for writing");
    return os;
}

double parse_double(const std::string& s, const std::string& file, std::size_t line) {
    const char* b = s.c_str();
    char* e = nullptr;
    errno = 0;
    const double v = std::strtod(b, &e);
    while (e && (*e == ' ' || *e == '\r' || *e == '\t')) ++e;
    if (e == b || *e != '\0' || errno == ERANGE || !std::isfinite(v))
        throw ParseError(file + ":" + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

}  // namespace

void write_path_csv(const std::string& file, const SamplePath& path) {
    auto os = open_out(file);
    os << "t,x\n";
    for (std::size_t k = 0; k < path.values.size(); ++k)
        os << fmt17(double(k) * path.delta) << ',' << fmt17(path.values[k]) << '\n';
    if (!os) throw IoError("write failed: " + file);
}

SamplePath read_path_csv(const std::string& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw IoError("cannot open " + file);
    std::string line;
    if (!std::getline(is, line)) throw ParseError(file + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,x") throw ParseError(file + ": expected header 't,x', got '" + line + "'");
    std::vector<double> t, x;
    std::size_t ln = 1;
    while (std::getline(is, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw ParseError(file + ":" + std::to_string(ln) + ": expected two columns");
        t.push_back(parse_double(line.substr(0, comma), file, ln));
        x.push_back(parse_double(line.substr(comma + 1), file, ln));
    }
    if (t.size() < 2) throw ParseError(file + ": need at least two rows");
    // rows were written as k * delta, so row 1 holds delta itself
    const double delta = t[1];
    if (t[0] != 0.0 || !(delta > 0.0)) throw ParseError(file + ": time column must start 0, delta > 0");
    for (std::size_t k = 0; k < t.size(); ++k)
        if (std::abs(t[k] - double(k) * delta) > 1e-9 * std::max(1.0, std::abs(t[k])))
            throw ParseError(file + ": time column is not a uniform grid starting at 0");
    SamplePath p;
    p.delta = delta;
    p.values = std::move(x);
    p.x0 = p.values.front();
    return p;
}

void write_periodogram_csv(const std::string& file, const Periodogram& pg) {
    auto os = open_out(file);
    os << "lambda,I\n";
    for (std::size_t i = 0; i < pg.ordinates.size(); ++i)
        os << fmt17(pg.frequency(i)) << ',' << fmt17(pg.ordinates[i]) << '\n';
    if (!os) throw IoError("write failed: " + file);
}

void write_g_csv(const std::string& file, const NystromSolution& sol) {
    auto os = open_out(file);
    os << "s,g,dg_dH\n";
    for (std::size_t i = 0; i < sol.nodes.size(); ++i)
        os << fmt17(sol.nodes[i]) << ',' << fmt17(sol.g_values[i]) << ',' << fmt17(sol.dH_values[i]) << '\n';
    if (!os) throw IoError("write failed: " + file);
}

}  // namespace mfou
