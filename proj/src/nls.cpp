#include "wg/nls.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wg/numeric.hpp"

namespace wg {

std::string toString(NlsSign s) { return s == NlsSign::Defocusing ? "defocusing" : "focusing"; }

NlsSign nlsSignFromString(const std::string& s) {
    if (s == "defocusing" || s == "+") return NlsSign::Defocusing;
    if (s == "focusing" || s == "-") return NlsSign::Focusing;
    throw std::invalid_argument("unknown NLS sign: " + s);
}

std::string toString(KickMode m) { return m == KickMode::Project ? "project" : "full-grid"; }

KickMode kickModeFromString(const std::string& s) {
    if (s == "project") return KickMode::Project;
    if (s == "full-grid") return KickMode::FullGrid;
    throw std::invalid_argument("unknown kick mode: " + s);
}

NlsRun makeNlsRun(const EvolutionPlan& plan, const SpectralField& phi, NlsSign sign, double T, double dt,
                  KickMode mode) {
    if (!(phi.lattice == plan.lattice)) throw std::invalid_argument("nls: lattice mismatch");
    if (!std::isfinite(T) || T == 0.0) throw std::invalid_argument("nls: duration must be finite and nonzero");
    const double N = plan.lattice.N;
    const double dtMax = 1.0 / (8.0 * N * N);
    if (dt <= 0.0) dt = dtMax;
    if (dt > dtMax * (1 + 1e-12)) throw std::invalid_argument("nls: dt above 1/(8 N^2)");
    NlsRun run;
    run.sign = sign;
    run.mode = mode;
    run.plan = plan;
    run.initial = phi;
    run.T = T;
    run.steps = long(std::ceil(std::abs(T) / dt - 1e-9));
    run.dt = std::abs(T) / double(run.steps);
    return run;
}

namespace {

void rotate(cplx* g, std::size_t n, double s, double h) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ph = -s * h * std::norm(g[i]);
        g[i] *= cplx(std::cos(ph), std::sin(ph));
    }
}

double fourthIntegral(const cplx* g, std::size_t n, double cell) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::norm(g[i]);
        acc += a * a;
    }
    return acc * cell;
}

double squareIntegral(const cplx* g, std::size_t n, double cell) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::norm(g[i]);
    return acc * cell;
}

// e(-tau H) over every grid frequency
std::vector<cplx> gridPropagator(const EvolutionPlan& plan, double tau) {
    const auto& lat = plan.lattice;
    std::vector<cplx> p(plan.gridSize());
    const double inv = 1.0 / double(plan.gridSize());
    for (int j2 = 0; j2 < plan.M2; ++j2) {
        const int k2 = 2 * j2 <= plan.M2 ? j2 : j2 - plan.M2;
        for (int j1 = 0; j1 < plan.M1; ++j1) {
            const int k1 = 2 * j1 <= plan.M1 ? j1 : j1 - plan.M1;
            const double h = plan.symbol.eval(lat.xi1(k1), lat.xi2(k2));
            const double ph = -2.0 * std::numbers::pi * std::fmod(tau * h, 1.0);
            p[std::size_t(j2) * std::size_t(plan.M1) + std::size_t(j1)] = inv * cplx(std::cos(ph), std::sin(ph));
        }
    }
    return p;
}

std::vector<cplx> latticePropagator(const EvolutionPlan& plan, double tau) {
    const auto h = symbolValues(plan);
    std::vector<cplx> p(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double ph = -2.0 * std::numbers::pi * std::fmod(tau * h[i], 1.0);
        p[i] = cplx(std::cos(ph), std::sin(ph));
    }
    return p;
}

}  // namespace

NlsRun splitStep(NlsRun run) {
    const auto& plan = run.plan;
    validate(plan);
    if (!(run.initial.lattice == plan.lattice)) throw std::invalid_argument("nls: lattice mismatch");
    if (run.steps < 1 || !(run.dt > 0.0)) throw std::invalid_argument("nls: run not initialised");
    if (run.diagnosticStride < 1 || run.checkpointStride < 0) throw std::invalid_argument("nls: bad strides");
    const double s = signValue(run.sign);
    const double tau = run.T > 0 ? run.dt : -run.dt;
    const double half = 0.5 * tau;
    const std::size_t G = plan.gridSize();
    const double cell = plan.lattice.volume() / double(G);

    GridTransform tf(plan);
    std::vector<cplx> grid(G);
    SpectralField c = run.initial;
    run.times.clear();
    run.mass.clear();
    run.checkpoints.clear();
    run.aborted = false;
    run.abortReason.clear();
    run.maxMassDrift = 0.0;
    double l4 = 0.0;

    // each step: the quantity at its start is read off the grid before the first kick
    auto stepWeight = [&](long n) { return (n == 0 || n == run.steps) ? 0.5 * run.dt : run.dt; };

    if (run.mode == KickMode::Project) {
        const auto prop = latticePropagator(plan, tau);
        const double m0 = l2NormSquared(c);
        auto record = [&](long n, double m) {
            if (n % run.diagnosticStride == 0 || n == run.steps) {
                run.times.push_back(double(n) * tau);
                run.mass.push_back(m);
            }
            if (run.checkpointStride > 0 && n % run.checkpointStride == 0) run.checkpoints.push_back(c);
            if (m0 > 0) run.maxMassDrift = std::max(run.maxMassDrift, std::abs(m - m0) / m0);
        };
        record(0, m0);
        for (long n = 0; n < run.steps; ++n) {
            const auto prev = c;
            tf.toPhysical(c.coeffs.data(), grid.data());
            l4 += stepWeight(n) * fourthIntegral(grid.data(), G, cell);
            rotate(grid.data(), G, s, half);
            tf.toSpectral(grid.data(), c.coeffs.data());
            for (std::size_t i = 0; i < prop.size(); ++i) c.coeffs[i] *= prop[i];
            tf.toPhysical(c.coeffs.data(), grid.data());
            rotate(grid.data(), G, s, half);
            tf.toSpectral(grid.data(), c.coeffs.data());
            const double m = l2NormSquared(c);
            if (!std::isfinite(m)) {
                c = prev;
                run.aborted = true;
                run.abortReason = "non-finite state at step " + std::to_string(n + 1);
                break;
            }
            record(n + 1, m);
        }
        if (!run.aborted) {
            tf.toPhysical(c.coeffs.data(), grid.data());
            l4 += stepWeight(run.steps) * fourthIntegral(grid.data(), G, cell);
        }
        run.final = c;
    } else {
        const auto prop = gridPropagator(plan, tau);
        tf.toPhysical(c.coeffs.data(), grid.data());
        const double m0 = squareIntegral(grid.data(), G, cell);
        auto record = [&](long n, double m) {
            if (n % run.diagnosticStride == 0 || n == run.steps) {
                run.times.push_back(double(n) * tau);
                run.mass.push_back(m);
            }
            if (run.checkpointStride > 0 && n % run.checkpointStride == 0) {
                auto snap = SpectralField::zeros(plan.lattice);
                tf.toSpectral(grid.data(), snap.coeffs.data());
                run.checkpoints.push_back(std::move(snap));
            }
            if (m0 > 0) run.maxMassDrift = std::max(run.maxMassDrift, std::abs(m - m0) / m0);
        };
        record(0, m0);
        for (long n = 0; n < run.steps; ++n) {
            const auto prev = grid;
            l4 += stepWeight(n) * fourthIntegral(grid.data(), G, cell);
            rotate(grid.data(), G, s, half);
            tf.forward(grid.data());
            for (std::size_t i = 0; i < G; ++i) grid[i] *= prop[i];
            tf.backward(grid.data());
            rotate(grid.data(), G, s, half);
            const double m = squareIntegral(grid.data(), G, cell);
            if (!std::isfinite(m)) {
                grid = prev;
                run.aborted = true;
                run.abortReason = "non-finite state at step " + std::to_string(n + 1);
                break;
            }
            record(n + 1, m);
        }
        if (!run.aborted) l4 += stepWeight(run.steps) * fourthIntegral(grid.data(), G, cell);
        run.final = SpectralField::zeros(plan.lattice);
        tf.toSpectral(grid.data(), run.final.coeffs.data());
    }
    run.l4Fourth = l4;
    return run;
}

PicardRecord picardIterate(const EvolutionPlan& plan, const SpectralField& phi, NlsSign sign, const PicardOptions& opt) {
    validate(plan);
    if (!(phi.lattice == plan.lattice)) throw std::invalid_argument("picard: lattice mismatch");
    if (plan.window.bumpKind != BumpKind::Sharp) throw std::invalid_argument("picard: needs a sharp window");
    if (opt.maxIter < 1) throw std::invalid_argument("picard: maxIter must be positive");
    const int S = plan.window.samples;
    int j0 = -1;
    for (int j = 0; j < S; ++j)
        if (std::abs(plan.window.time(j)) <= 1e-12 * plan.window.length()) j0 = j;
    if (j0 < 0) throw std::invalid_argument("picard: t = 0 is not a window node");

    const std::size_t L = plan.lattice.size(), G = plan.gridSize();
    const std::size_t bytes = std::size_t(S) * L * sizeof(cplx);
    if (bytes > plan.memoryBudgetBytes)
        throw std::length_error("picard: " + std::to_string(bytes) + " bytes exceed the memory budget");

    PicardRecord rec;
    rec.delta = opt.delta;
    rec.belowDelta = l2Norm(phi) <= opt.delta * (1 + 1e-12);
    if (phi.isZero()) {
        rec.finalData = phi;
        rec.iterations = 1;
        rec.differences.push_back(0.0);
        rec.l4Norms.push_back(0.0);
        return rec;
    }

    const double s = signValue(sign);
    const double cell = plan.lattice.volume() / double(G);
    const auto h = symbolValues(plan);
    const auto w = plan.window.weights();
    // interaction picture v(t) = S(-t) u(t), one spectral slice per node
    std::vector<cplx> v(std::size_t(S) * L);
    for (int j = 0; j < S; ++j) std::copy(phi.coeffs.begin(), phi.coeffs.end(), v.begin() + std::ptrdiff_t(std::size_t(j) * L));

    GridTransform tf(plan);
    std::vector<cplx> grid(G), gCur(L), gPrev(L), acc(L), diff(L);
    auto slice = [&](int j) { return v.data() + std::size_t(j) * L; };
    auto backPhase = [&](int j, std::vector<cplx>& c) {
        const double t = plan.window.time(j);
        for (std::size_t k = 0; k < L; ++k) {
            const double ph = 2.0 * std::numbers::pi * std::fmod(t * h[k], 1.0);
            c[k] *= cplx(std::cos(ph), std::sin(ph));
        }
    };
    // S(-t_j) P(|u|^2 u) at node j, also returning int |u|^4
    auto nonlinear = [&](int j, std::vector<cplx>& out) {
        tf.toPhysical(slice(j), h.data(), plan.window.time(j), grid.data());
        const double f = fourthIntegral(grid.data(), G, cell);
        for (auto& g : grid) g *= std::norm(g);
        tf.toSpectral(grid.data(), out.data());
        backPhase(j, out);
        return f;
    };

    int rising = 0;
    for (int n = 0; n < opt.maxIter; ++n) {
        double normFourth = 0.0, diffFourth = 0.0;
        std::vector<cplx> g0(L);
        normFourth += w[std::size_t(j0)] * nonlinear(j0, g0);
        for (int dir : {1, -1}) {
            gPrev = g0;
            std::fill(acc.begin(), acc.end(), cplx(0.0, 0.0));
            for (int j = j0 + dir; j >= 0 && j < S; j += dir) {
                normFourth += w[std::size_t(j)] * nonlinear(j, gCur);
                const double step = plan.window.time(j) - plan.window.time(j - dir);
                cplx* vj = slice(j);
                for (std::size_t k = 0; k < L; ++k) {
                    acc[k] += 0.5 * step * (gCur[k] + gPrev[k]);
                    const cplx next = phi.coeffs[k] - cplx(0.0, s) * acc[k];
                    diff[k] = next - vj[k];
                    vj[k] = next;
                }
                tf.toPhysical(diff.data(), h.data(), plan.window.time(j), grid.data());
                diffFourth += w[std::size_t(j)] * fourthIntegral(grid.data(), G, cell);
                std::swap(gPrev, gCur);
            }
        }
        // normFourth belongs to the input iterate u_n
        if (n > 0) rec.l4Norms.push_back(std::pow(normFourth, 0.25));
        const double d = std::pow(std::max(diffFourth, 0.0), 0.25);
        rec.differences.push_back(d);
        if (rec.differences.size() >= 2) {
            const double prev = rec.differences[rec.differences.size() - 2];
            const double f = prev > 0 ? d / prev : 0.0;
            rec.factors.push_back(f);
            rising = f >= 1.0 ? rising + 1 : 0;
            if (rising >= 3) rec.diverged = true;
        }
        rec.iterations = n + 1;
        const double ref = std::pow(normFourth, 0.25);
        if (rec.diverged || !std::isfinite(d) || d <= opt.relTol * ref) break;
    }
    // L4 norm of the last iterate
    double last = 0.0;
    for (int j = 0; j < S; ++j) {
        tf.toPhysical(slice(j), h.data(), plan.window.time(j), grid.data());
        last += w[std::size_t(j)] * fourthIntegral(grid.data(), G, cell);
    }
    rec.l4Norms.push_back(std::pow(last, 0.25));
    rec.finalData = SpectralField::zeros(plan.lattice);
    std::copy(slice(S - 1), slice(S - 1) + L, rec.finalData.coeffs.begin());
    rec.finalData = evolve(plan, rec.finalData, plan.window.t1);
    return rec;
}

GlobalRun globalSmallDataRun(const EvolutionPlan& plan, const SpectralField& phi, NlsSign sign, int T, double dt,
                             KickMode mode) {
    if (T < 1) throw std::invalid_argument("global run: T must be a positive integer");
    GlobalRun out;
    auto data = phi;
    const double m0 = l2NormSquared(phi);
    for (int k = 0; k < T; ++k) {
        out.massAtRestart.push_back(l2NormSquared(data));
        auto run = splitStep(makeNlsRun(plan, data, sign, 1.0, dt, mode));
        data = run.final;
        out.l4PerInterval.push_back(std::pow(run.l4Fourth, 0.25));
        const bool stop = run.aborted;
        out.intervals.push_back(std::move(run));
        if (stop) break;
    }
    out.massAtRestart.push_back(l2NormSquared(data));
    if (m0 > 0)
        for (double m : out.massAtRestart) out.maxMassDeviation = std::max(out.maxMassDeviation, std::abs(m - m0) / m0);
    return out;
}

}  // namespace wg

namespace wg {

SmallnessCalibration calibrateSmallness(const EvolutionPlan& plan, const SpectralField& profile, NlsSign sign,
                                        double lo, double hi, int steps, const PicardOptions& opt) {
    if (profile.isZero()) throw std::invalid_argument("calibration: zero profile");
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("calibration: need 0 < lo < hi");
    const auto unit = normalized(profile);
    SmallnessCalibration cal;
    auto contracts = [&](double norm) {
        const auto rec = picardIterate(plan, unit.scaled(norm), sign, opt);
        bool ok = !rec.diverged;
        for (double d : rec.differences) ok = ok && std::isfinite(d);
        for (double f : rec.factors) ok = ok && f < 1.0;
        cal.probes.push_back({norm, ok});
        return ok;
    };
    if (!contracts(lo)) throw std::runtime_error("calibration: no contraction at the lower end");
    if (contracts(hi)) {
        cal.threshold = hi;
        cal.bracketed = false;
        return cal;
    }
    for (int k = 0; k < steps; ++k) {
        const double mid = std::sqrt(lo * hi);
        (contracts(mid) ? lo : hi) = mid;
    }
    cal.threshold = lo;
    return cal;
}

}  // namespace wg
