#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value text with [section] headers. Known keys map onto fields; any other
// section.key pair is kept in `extra` and written back unchanged.
struct RunConfig {
    // [run]
    std::string scenario = "rt-hyperbolic";
    std::uint64_t seed = 1;
    int threads = 1;
    std::string outDir = ".";
    std::string format = "csv";
    std::vector<std::string> accept;  // acceptance checks to evaluate, by id
    // [lattice]
    double lambda = 1.0;
    double L = 0.0;  // 0: 8 max(lambda, 1)
    std::vector<double> N{8, 16, 32, 64};
    // [ensemble]
    int ensembleSize = 64;
    std::string ensembleKind = "continuum";
    // [constants]
    double cA = 100.0;
    double theta = 1.0;
    double theta2 = 2.0;
    double comparability = 2.0;
    double thetaRes = 1.0;
    // [extremizer]
    double tol = 1e-4;
    int maxIter = 200;
    // [nls]
    double delta = 0.1;
    std::string sign = "defocusing";
    std::string kickMode = "project";
    double dt = 0.0;  // 0: 1/(8 N^2)
    // [gate]
    double gateTol = 0.05;

    std::map<std::string, std::string> extra;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parseConfig(const std::string& text);
std::string serializeConfig(const RunConfig& cfg);
RunConfig loadConfig(const std::string& path);
// WG_OUT and WG_THREADS override the output directory and thread count
void applyEnvironment(RunConfig& cfg);

// shortest decimal text that reads back to the same double, '.' separator
std::string formatDouble(double v);
double parseDouble(const std::string& s);
std::vector<double> parseDoubleList(const std::string& s);  // "8,16,32" or "8..64" (dyadic)

}  // namespace wg
