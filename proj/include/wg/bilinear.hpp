#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wg/catalog.hpp"
#include "wg/numeric.hpp"
#include "wg/propagator.hpp"

namespace wg {

struct BilinearConfig {
    double N1 = 16.0, N2 = 2.0;  // dyadic, N1 >= 4 N2
    double lambda = 1.0;
    int ensembleSize = 4;
    std::uint64_t seed = 1;
    int refineSteps = 0;  // alternating power steps applied to each member
    EvolutionPlan plan;   // lattice cutoff >= N1, window [0,1]
};

// lattice (lambda, L, N1), L <= 0 means 8 max(lambda, 1)
BilinearConfig makeBilinearConfig(double N1, double N2, double lambda, double L = 0.0,
                                  SymbolKind kind = SymbolKind::Hyperbolic);
void validate(const BilinearConfig& cfg);

// (1/lambda + N2/N1)^(1/2)
double bilinearBound(double N1, double N2, double lambda);

// || S(t) P_N1 phi1 * S(t) P_N2 phi2 ||_{L^2(window x box)}; a zero field gives 0,
// a nonzero field with empty projection throws
double bilinearNorm(const BilinearConfig& cfg, const SpectralField& phi1, const SpectralField& phi2);
// same without projections or checks
double bilinearNormRaw(const EvolutionPlan& plan, const SpectralField& a, const SpectralField& b);

// one power step: phi1 <- normalized P_N1 (adjoint of the map phi1 -> u v applied to u v)
SpectralField bilinearAscent(const BilinearConfig& cfg, const SpectralField& phi1, const SpectralField& phi2);

struct BilinearSample {
    double N1 = 0, N2 = 0, lambda = 0;
    double ensembleMax = 0.0;  // max of norm / (|phi1| |phi2|) over raw members
    double refined = 0.0;      // the same after refineSteps alternating steps
    double bound = 0.0;
};

BilinearSample bilinearEnsemble(const BilinearConfig& cfg);

struct BilinearPoint {
    double N1 = 0, N2 = 0, lambda = 0;
    double value = 0.0;
};

// S^2 = A (N2/N1)^(2p) + B lambda^(-2q), fitted in relative least squares; per-regime
// log-log slopes use points where one term is at least twice the other
struct BilinearFit {
    double exponentRatio = 0.0;   // p
    double exponentLambda = 0.0;  // q
    double A = 0.0, B = 0.0;
    double maxRelResidual = 0.0;
    std::vector<double> residuals;
    double regimeSlopeRatio = 0.0;
    double regimeSlopeLambda = 0.0;
    int regimePointsRatio = 0;
    int regimePointsLambda = 0;
};

BilinearFit bilinearScalingFit(const std::vector<BilinearPoint>& points);

// rz measure of E_{a,b}; N1, N2 <= 0 default to |a|, |b|; |a| ~ N1 and |b| ~ N2 are
// checked with comparability 2
double eabMeasure(Vec2 a, Vec2 b, double lambda, double thetaRes = 1.0, double N1 = 0.0, double N2 = 0.0,
                  const MeasureOptions& opt = {});

// a with N1/2 <= |a1| <= N1, a2 on Z/lambda; b in the dyadic N2 shell, b2 on Z/lambda
std::pair<Vec2, Vec2> sampleEabPair(Philox& rng, double N1, double N2, double lambda);

struct EabSweepPoint {
    double N1 = 0, N2 = 0, lambda = 0;
    double maxMeasure = 0.0;
    double maxSlice = 0.0;  // longest eta1-interval over all draws
    double bound = 0.0;     // 1/lambda + N2/N1
    double ratio = 0.0;     // maxMeasure / bound
};

// random draws plus the aligned and orthogonal pairs (N1,0),(N2,0) and (N1,0),(0,N2)
EabSweepPoint eabSweep(double N1, double N2, double lambda, int draws, std::uint64_t seed, double thetaRes = 1.0,
                       const MeasureOptions& opt = {});

}  // namespace wg
