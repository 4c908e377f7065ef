#include "wg/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wg {

std::string formatDouble(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parseDouble(const std::string& s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    if (b != e && *b == '+') ++b;
    auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e) throw ConfigError("not a number: '" + s + "'");
    return v;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> splitList(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::string joinList(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

long long parseInteger(const std::string& s) {
    long long v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("not an integer: '" + s + "'");
    return v;
}

std::uint64_t parseUnsigned(const std::string& s) {
    std::uint64_t v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("not an unsigned integer: '" + s + "'");
    return v;
}

int parseInt(const std::string& s) {
    const auto v = parseInteger(s);
    if (v < -2147483647LL || v > 2147483647LL) throw ConfigError("integer out of range: " + s);
    return int(v);
}

}  // namespace

std::vector<double> parseDoubleList(const std::string& s) {
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
        const double a = parseDouble(trim(s.substr(0, dots))), b = parseDouble(trim(s.substr(dots + 2)));
        if (!(a > 0) || !(b >= a)) throw ConfigError("bad range: " + s);
        std::vector<double> out;
        for (double x = a; x <= b * (1 + 1e-12); x *= 2) out.push_back(x);
        return out;
    }
    std::vector<double> out;
    for (const auto& t : splitList(s)) out.push_back(parseDouble(t));
    return out;
}

RunConfig parseConfig(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line, section;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const auto t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("line " + std::to_string(lineNo) + ": bad section header");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineNo) + ": expected key=value");
        if (section.empty()) throw ConfigError("line " + std::to_string(lineNo) + ": key outside a section");
        const std::string key = section + "." + trim(t.substr(0, eq));
        const std::string v = trim(t.substr(eq + 1));
        try {
            if (key == "run.scenario") c.scenario = v;
            else if (key == "run.seed") c.seed = parseUnsigned(v);
            else if (key == "run.threads") c.threads = parseInt(v);
            else if (key == "run.out") c.outDir = v;
            else if (key == "run.format") c.format = v;
            else if (key == "run.accept") c.accept = splitList(v);
            else if (key == "lattice.lambda") c.lambda = parseDouble(v);
            else if (key == "lattice.L") c.L = parseDouble(v);
            else if (key == "lattice.N") c.N = parseDoubleList(v);
            else if (key == "ensemble.size") c.ensembleSize = parseInt(v);
            else if (key == "ensemble.kind") c.ensembleKind = v;
            else if (key == "constants.cA") c.cA = parseDouble(v);
            else if (key == "constants.theta") c.theta = parseDouble(v);
            else if (key == "constants.theta2") c.theta2 = parseDouble(v);
            else if (key == "constants.comparability") c.comparability = parseDouble(v);
            else if (key == "constants.thetaRes") c.thetaRes = parseDouble(v);
            else if (key == "extremizer.tol") c.tol = parseDouble(v);
            else if (key == "extremizer.maxIter") c.maxIter = parseInt(v);
            else if (key == "nls.delta") c.delta = parseDouble(v);
            else if (key == "nls.sign") c.sign = v;
            else if (key == "nls.mode") c.kickMode = v;
            else if (key == "nls.dt") c.dt = parseDouble(v);
            else if (key == "gate.tol") c.gateTol = parseDouble(v);
            else c.extra[key] = v;
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineNo) + " (" + key + "): " + e.what());
        }
    }
    if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
    if (c.threads < 1) throw ConfigError("threads must be >= 1");
    return c;
}

std::string serializeConfig(const RunConfig& c) {
    std::ostringstream o;
    std::vector<std::string> Ns;
    for (double n : c.N) Ns.push_back(formatDouble(n));
    o << "[run]\n"
      << "scenario=" << c.scenario << "\n"
      << "seed=" << c.seed << "\n"
      << "threads=" << c.threads << "\n"
      << "out=" << c.outDir << "\n"
      << "format=" << c.format << "\n"
      << "accept=" << joinList(c.accept) << "\n"
      << "\n[lattice]\n"
      << "lambda=" << formatDouble(c.lambda) << "\n"
      << "L=" << formatDouble(c.L) << "\n"
      << "N=" << joinList(Ns) << "\n"
      << "\n[ensemble]\n"
      << "size=" << c.ensembleSize << "\n"
      << "kind=" << c.ensembleKind << "\n"
      << "\n[constants]\n"
      << "cA=" << formatDouble(c.cA) << "\n"
      << "theta=" << formatDouble(c.theta) << "\n"
      << "theta2=" << formatDouble(c.theta2) << "\n"
      << "comparability=" << formatDouble(c.comparability) << "\n"
      << "thetaRes=" << formatDouble(c.thetaRes) << "\n"
      << "\n[extremizer]\n"
      << "tol=" << formatDouble(c.tol) << "\n"
      << "maxIter=" << c.maxIter << "\n"
      << "\n[nls]\n"
      << "delta=" << formatDouble(c.delta) << "\n"
      << "sign=" << c.sign << "\n"
      << "mode=" << c.kickMode << "\n"
      << "dt=" << formatDouble(c.dt) << "\n"
      << "\n[gate]\n"
      << "tol=" << formatDouble(c.gateTol) << "\n";
    std::string current;
    for (const auto& [k, v] : c.extra) {
        const auto dot = k.find('.');
        if (dot == std::string::npos || dot == 0) throw ConfigError("extra key without section: " + k);
        const std::string sec = k.substr(0, dot), key = k.substr(dot + 1);
        if (sec != current) {
            o << "\n[" << sec << "]\n";
            current = sec;
        }
        o << key << "=" << v << "\n";
    }
    return o.str();
}

RunConfig loadConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return parseConfig(s.str());
}

void applyEnvironment(RunConfig& cfg) {
    if (const char* o = std::getenv("WG_OUT"); o && *o) cfg.outDir = o;
    if (const char* t = std::getenv("WG_THREADS"); t && *t) {
        cfg.threads = parseInt(t);
        if (cfg.threads < 1) throw ConfigError("WG_THREADS must be >= 1");
    }
}

}  // namespace wg
