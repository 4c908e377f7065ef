#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wg/bilinear.hpp"
#include "wg/catalog.hpp"
#include "wg/extremizer.hpp"
#include "wg/functional.hpp"
#include "wg/measure.hpp"
#include "wg/nls.hpp"
#include "wg/report.hpp"

namespace wg {

// Iid: independent complex Gaussians on every lattice point. The law depends on L.
// Continuum: F(xi1, k2) = sum_m g(m, k2) exp(-(xi1 - m h)^2 / (2 s^2)), h = s = 1/2,
// centres |m h| <= N - 2 s, sampled at xi1 = k1 / L. The draws do not depend on L, so
// the same member is a finer sampling of the same profile when the box grows.
enum class EnsembleKind { Iid, Continuum };

std::string toString(EnsembleKind k);
EnsembleKind ensembleKindFromString(const std::string& s);

SpectralField ensembleMember(EnsembleKind kind, const FrequencyLattice& lat, std::uint64_t seed,
                             std::uint64_t member, bool meanZeroX2 = false);

// L <= 0 selects 8 max(lambda, 1); sharp window [0, 1]
EvolutionPlan scenarioPlan(Scenario s, double lambda, double L, double N, int threads = 1);
// same, without the L >= 8 max(lambda, 1) floor; only for the small-box negative control
EvolutionPlan probePlan(Scenario s, double lambda, double L, double N, int threads = 1);

struct EnsembleStats {
    std::vector<double> ratios;
    double max = 0.0;
    std::size_t argmax = 0;
};

EnsembleStats ensembleRatios(const EvolutionPlan& plan, Scenario s, EnsembleKind kind, std::uint64_t seed, int size);

struct RatioSweepOptions {
    Scenario scenario = Scenario::RTHyperbolic;
    double lambda = 1.0;
    double L = 0.0;
    double boxPerN = 0.0;  // each N runs on a box of length max(L, boxPerN * N)
    std::vector<double> N{8, 16, 32, 64};
    int ensembleSize = 16;
    EnsembleKind ensemble = EnsembleKind::Continuum;
    std::uint64_t seed = 1;
    int threads = 1;
    bool extremize = true;
    ExtremizerOptions extremizer;
};

// the growth fit uses the extremized values, or the ensemble maxima when extremize is off
RatioSweep runRatioSweep(const RatioSweepOptions& opt);

struct GateRecord {
    std::string name;
    double L = 0.0;
    double atL = 0.0;
    double at2L = 0.0;
    double relChange = 0.0;
    double tol = 0.05;
    bool pass = false;
};

// evaluates quantity(L) and quantity(2L); pass iff |q(2L) - q(L)| <= tol |q(L)|
GateRecord doubleBoxGate(const std::string& name, double L, const std::function<double(double)>& quantity,
                         double tol = 0.05);

// single mode at xi = (1, 0); the ratio times (L lambda)^{1/4} is the per-volume value
GateRecord singleModeGate(Scenario s, double lambda, double L, double N, double tol = 0.05);
// ensemble maximum of the ratio; L below 8 max(lambda, 1) goes through probePlan
GateRecord ensembleGate(Scenario s, double lambda, double L, double N, int size, std::uint64_t seed,
                        EnsembleKind kind = EnsembleKind::Continuum, int threads = 1, double tol = 0.05);

// report builders shared by the CLI and the tests

Report ratioSweepReport(const RatioSweep& sweep, const RatioSweepOptions& opt);

// set id from the catalog taking (C0, N[, theta]); one row per N
Report measureReport(const std::string& setId, double C0, const std::vector<double>& Ns, double lambda,
                     double theta = 1.0, const MeasureOptions& opt = {});

struct LemmaCorpusRow {
    int index = 0;
    double lambda = 1.0;
    LemmaRecord record;
    double impliedCDoubled = 0.0;  // bounding box doubled about its centre
};

std::vector<LemmaCorpusRow> lemmaCorpusRows(std::uint64_t seed, int count, const std::vector<double>& lambdas,
                                            bool doubled = true, const MeasureOptions& opt = {});
Report lemmaCorpusReport(const std::vector<LemmaCorpusRow>& rows, std::uint64_t seed);

Report propCheckReport(const PropCheckResult& r);

std::vector<BilinearSample> bilinearSweep(const std::vector<double>& N1s, const std::vector<double>& N2s,
                                          const std::vector<double>& lambdas, int ensembleSize, int refineSteps,
                                          std::uint64_t seed, int threads = 1);
Report bilinearSweepReport(const std::vector<BilinearSample>& samples, const BilinearFit* fit);

Report eabReport(const std::vector<EabSweepPoint>& points);

// one row per accepted or rejected step of every run
Report extremizeReport(const ExtremizerBest& best);

// one row per diagnostic time
Report nlsReport(const NlsRun& run);
// one row per Picard iteration
Report picardReport(const PicardRecord& rec, double N, double phiNorm);

}  // namespace wg
