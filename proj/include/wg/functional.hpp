#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wg/lattice.hpp"
#include "wg/propagator.hpp"

namespace wg {

// (integral of w(t) |u|^4 dx dt) over window x box
double l4Fourth(const EvolutionPlan& plan, const SpectralField& phi);
double l4SpaceTimeNorm(const EvolutionPlan& plan, const SpectralField& phi);
double strichartzRatio(const EvolutionPlan& plan, const SpectralField& phi);

struct QuadWeight {
    enum class Constraint { Indicator, SmoothBump };
    enum class Restriction { None, A1, A2plain, A2refined };

    Constraint constraint = Constraint::Indicator;
    Restriction restriction = Restriction::None;
    double theta = 1.0;
    double theta2 = 2.0;
    double cA = 100.0;
    std::array<int, 3> octant{1, 1, 1};  // j in {-1,1}^3, used by A2refined
};

std::string toString(QuadWeight::Restriction r);

// normalized profile of the SmoothBump constraint, peak 1 at 0, support [-1/2,1/2]
double quadBump(double s);

// Exact lattice sum over (u,v,w) with u +- v and u +- w on the lattice of
//   f(u+v) f(u-v) f(u+w) f(u-w) * constraint(H(v) - H(w)) * restriction(v,w)
// with weight (1/(L lambda))^3. The sum is accumulated exactly and rounded once,
// then multiplied by the weight.
struct QuadFormOptions {
    SymbolKind symbol = SymbolKind::Hyperbolic;
    double tripleBudget = 2e8;
    int threads = 1;
};

double quadForm(const SpectralField& f, const QuadWeight& weight, const QuadFormOptions& opt = {});

// sum over the 8 octants of the refined A2 piece
double quadFormA2RefinedSum(const SpectralField& f, QuadWeight weight, const QuadFormOptions& opt = {});

// sum_k sum_u ( sum_v 1_{|H(v)-k|<=1} f(u+v) f(u-v) )^2, the pigeonholed form
double quadFormKDecomposition(const SpectralField& f, const QuadFormOptions& opt = {});

struct QuadFormBound {
    double value = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
};

QuadFormBound quadFormBound(const SpectralField& f, const QuadWeight& weight, double C,
                            const QuadFormOptions& opt = {});

enum class Scenario { RTHyperbolic, RTElliptic, RTMixed, RTMixedMeanZero, TTElliptic, TTHyperbolic };

std::string toString(Scenario s);
Scenario scenarioFromString(const std::string& s);
SymbolKind symbolOf(Scenario s);
Geometry geometryOf(Scenario s);
bool meanZeroOf(Scenario s);

struct GrowthFit {
    double powerExponent = 0.0;   // slope of log R against log N
    double logCoefficient = 0.0;  // slope of R^4 against log N
    std::vector<double> powerResiduals;
    std::vector<double> logResiduals;
};

GrowthFit fitGrowth(const std::vector<double>& N, const std::vector<double>& R);

struct RatioSweepPoint {
    double N = 0.0;
    double ensembleMax = 0.0;
    double extremized = 0.0;
};

struct RatioSweep {
    Scenario scenario = Scenario::RTHyperbolic;
    double lambda = 1.0;
    double L = 8.0;
    std::uint64_t seed = 0;
    std::vector<RatioSweepPoint> points;
    GrowthFit fit;  // on the extremized values
};

}  // namespace wg
