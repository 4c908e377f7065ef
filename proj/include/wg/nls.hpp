#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wg/propagator.hpp"

namespace wg {

// i u_t = 2 pi H(D) u + s |u|^2 u, s = +1 defocusing, -1 focusing; the linear part is
// the propagator's e(-t H)
enum class NlsSign { Focusing, Defocusing };

std::string toString(NlsSign s);
NlsSign nlsSignFromString(const std::string& s);
inline double signValue(NlsSign s) { return s == NlsSign::Defocusing ? 1.0 : -1.0; }

// Project: the state lives on the lattice and each phase rotation is projected back.
// FullGrid: the state lives on the whole oversampled grid, so rotations stay exact.
enum class KickMode { Project, FullGrid };

std::string toString(KickMode m);
KickMode kickModeFromString(const std::string& s);

struct PicardRecord {
    std::vector<double> differences;  // ||u_{n+1} - u_n|| in L4 over the window
    std::vector<double> factors;      // consecutive difference ratios
    std::vector<double> l4Norms;      // ||u_{n+1}|| in L4 over the window
    int iterations = 0;
    bool diverged = false;  // factor >= 1 three times in a row
    bool belowDelta = true;
    double delta = 0.1;
    SpectralField finalData;  // u(t1) of the last iterate
};

struct NlsRun {
    NlsSign sign = NlsSign::Defocusing;
    KickMode mode = KickMode::Project;
    EvolutionPlan plan;
    SpectralField initial;
    double T = 1.0;  // signed duration
    double dt = 0.0;
    long steps = 0;
    std::string scheme = "strang-split-step";
    int diagnosticStride = 1;
    int checkpointStride = 0;  // 0: no checkpoints

    std::vector<double> times, mass;
    std::vector<SpectralField> checkpoints;
    double l4Fourth = 0.0;     // trapezoid over all steps of int |u|^4
    double maxMassDrift = 0.0; // max relative deviation from the initial mass
    SpectralField final;
    bool aborted = false;
    std::string abortReason;
    PicardRecord picard;
};

// dt <= 0 selects 1/(8 N^2); steps = ceil(|T| / dt) and dt is shrunk so that steps * dt = |T|
NlsRun makeNlsRun(const EvolutionPlan& plan, const SpectralField& phi, NlsSign sign, double T = 1.0,
                  double dt = 0.0, KickMode mode = KickMode::Project);

NlsRun splitStep(NlsRun run);

struct PicardOptions {
    int maxIter = 12;
    double delta = 0.1;
    double relTol = 1e-13;  // stop once a difference is this small relative to the iterate
};

// Picard iteration on the Duhamel formula over plan.window (sharp, containing t = 0).
// Iterate 0 is the linear solution. The Duhamel integral uses cumulative trapezoid
// sums on the window nodes.
PicardRecord picardIterate(const EvolutionPlan& plan, const SpectralField& phi, NlsSign sign,
                           const PicardOptions& opt = {});

struct SmallnessCalibration {
    double threshold = 0.0;  // largest probed norm that still contracted
    bool bracketed = true;   // false when the upper end contracted too
    std::vector<std::pair<double, bool>> probes;
};

// Geometric bisection on the L2 norm of a fixed profile for the onset of contraction
// failure: diverged, a non-finite difference, or any factor >= 1.
SmallnessCalibration calibrateSmallness(const EvolutionPlan& plan, const SpectralField& profile, NlsSign sign,
                                        double lo, double hi, int steps = 8, const PicardOptions& opt = {});

struct GlobalRun {
    std::vector<NlsRun> intervals;
    std::vector<double> l4PerInterval;  // fourth root of each interval's l4Fourth
    std::vector<double> massAtRestart;
    double maxMassDeviation = 0.0;      // relative, across restarts
};

GlobalRun globalSmallDataRun(const EvolutionPlan& plan, const SpectralField& phi, NlsSign sign, int T,
                             double dt = 0.0, KickMode mode = KickMode::Project);

}  // namespace wg
