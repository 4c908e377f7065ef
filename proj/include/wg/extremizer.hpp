#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wg/numeric.hpp"
#include "wg/propagator.hpp"

namespace wg {

enum class StopReason { Tolerance, MaxIter, Stall };

std::string toString(StopReason r);

struct ExtremizerStep {
    double ratio = 0.0;
    bool accepted = false;
    int halvings = 0;  // mixes applied before this candidate
};

struct ExtremizerTrace {
    std::vector<ExtremizerStep> iterates;
    SpectralField final;
    double N = 0.0;
    std::string scenario;
    std::string init;
    std::uint64_t seed = 0;
    StopReason stop = StopReason::MaxIter;
    double initialRatio = 0.0;
    double finalRatio = 0.0;
};

struct ExtremizerOptions {
    int maxIter = 200;
    double tol = 1e-4;
    int stallWindow = 5;   // accepted steps compared for the tolerance test
    int maxHalvings = 6;
    bool meanZeroX2 = false;
};

// L^4 fourth power of u and the unnormalized image sum_t w(t) S(-t)(|u|^2 u), projected
struct FixedPointImage {
    double l4Fourth = 0.0;
    SpectralField image;
};

FixedPointImage fixedPointImage(const EvolutionPlan& plan, double N, const SpectralField& phi, bool meanZeroX2 = false);

ExtremizerTrace extremize(const EvolutionPlan& plan, double N, const SpectralField& init,
                          const ExtremizerOptions& opt = {});

enum class InitKind { Gaussian, X2Constant, Hyperbola };

std::string toString(InitKind k);
InitKind initKindFromString(const std::string& s);

// Gaussian: complex normal coefficients on P_{<=N}
// X2Constant: k2 = 0 only, profile exp(-xi1^2 / (2 (N/4)^2)), no randomness
// Hyperbola: complex normal coefficients where |H(xi)| <= 1
SpectralField extremizerInit(InitKind kind, const EvolutionPlan& plan, double N, Philox& rng);

struct ExtremizerBest {
    std::vector<ExtremizerTrace> runs;  // one per init kind that is not degenerate
    std::size_t best = 0;
    double bestRatio = 0.0;
};

// runs the three init kinds and keeps the best final ratio
ExtremizerBest extremizeBest(const EvolutionPlan& plan, double N, std::uint64_t seed, const std::string& scenario,
                             const ExtremizerOptions& opt = {});

// rough floating point work of one fixed-point evaluation
double extremizerIterationCost(const EvolutionPlan& plan);

}  // namespace wg
