#include "wg/propagator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "wg/numeric.hpp"

namespace wg {

namespace {

std::mutex& plannerMutex() {
    static std::mutex m;
    return m;
}

inline int wrap(int k, int M) { return k < 0 ? k + M : k; }

}  // namespace

EvolutionPlan makePlan(const FrequencyLattice& lat, SymbolKind kind, TimeWindow window) {
    EvolutionPlan p;
    p.symbol = DispersionSymbol{kind};
    p.window = window;
    p.lattice = lat;
    p.M1 = fastFftSize(2 * lat.width1());
    p.M2 = fastFftSize(2 * lat.width2());
    validate(p);
    return p;
}

EvolutionPlan makePlan(const FrequencyLattice& lat, SymbolKind kind, double t0, double t1) {
    return makePlan(lat, kind, TimeWindow::sharp(t0, t1, minTimeSamples(lat.N, t0, t1) + 1));
}

void validate(const EvolutionPlan& plan) {
    const auto& lat = plan.lattice;
    if (plan.M1 < 2 * lat.width1() || plan.M2 < 2 * lat.width2())
        throw std::invalid_argument("evolution plan: physical grid below 2x oversampling");
    if (plan.window.samples < minTimeSamples(lat.N, plan.window.t0, plan.window.t1))
        throw std::invalid_argument("evolution plan: too few time samples");
}

std::vector<double> symbolValues(const EvolutionPlan& plan) {
    const auto& lat = plan.lattice;
    std::vector<double> h(lat.size());
    for (std::size_t i = 0; i < lat.size(); ++i) h[i] = plan.symbol.eval(lat.xi1(lat.k1Of(i)), lat.xi2(lat.k2Of(i)));
    return h;
}

SpectralField evolve(const EvolutionPlan& plan, const SpectralField& phi, double t) {
    if (!(phi.lattice == plan.lattice)) throw std::invalid_argument("evolve: lattice mismatch");
    SpectralField out = phi;
    if (t == 0.0) return out;
    const auto h = symbolValues(plan);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double ph = -2.0 * std::numbers::pi * std::fmod(t * h[i], 1.0);
        out.coeffs[i] *= cplx(std::cos(ph), std::sin(ph));
    }
    return out;
}

GridTransform::GridTransform(const EvolutionPlan& plan)
    : lat_(plan.lattice), M1_(plan.M1), M2_(plan.M2), grid_(plan.gridSize()) {
    std::lock_guard<std::mutex> lock(plannerMutex());
    buf_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * grid_));
    if (!buf_) throw std::bad_alloc();
    auto* b = reinterpret_cast<fftw_complex*>(buf_);
    fwd_ = fftw_plan_dft_2d(M2_, M1_, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(M2_, M1_, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
}

GridTransform::~GridTransform() {
    std::lock_guard<std::mutex> lock(plannerMutex());
    fftw_destroy_plan(reinterpret_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(reinterpret_cast<fftw_plan>(bwd_));
    fftw_free(buf_);
}

void GridTransform::toPhysical(const cplx* coeffs, const double* symbol, double t, cplx* grid) {
    std::memset(static_cast<void*>(buf_), 0, sizeof(cplx) * grid_);
    const double w = lat_.cellWeight();
    const std::size_t n = lat_.size();
    for (std::size_t i = 0; i < n; ++i) {
        cplx c = coeffs[i];
        if (c == cplx(0.0, 0.0)) continue;
        if (symbol) {
            const double ph = -2.0 * std::numbers::pi * std::fmod(t * symbol[i], 1.0);
            c *= cplx(std::cos(ph), std::sin(ph));
        }
        const int j1 = wrap(lat_.k1Of(i), M1_), j2 = wrap(lat_.k2Of(i), M2_);
        buf_[std::size_t(j2) * std::size_t(M1_) + std::size_t(j1)] = c * w;
    }
    fftw_execute(reinterpret_cast<fftw_plan>(bwd_));
    std::memcpy(static_cast<void*>(grid), buf_, sizeof(cplx) * grid_);
}

void GridTransform::toSpectral(const cplx* grid, cplx* coeffs) {
    std::memcpy(static_cast<void*>(buf_), grid, sizeof(cplx) * grid_);
    fftw_execute(reinterpret_cast<fftw_plan>(fwd_));
    const double s = lat_.volume() / double(grid_);
    const std::size_t n = lat_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const int j1 = wrap(lat_.k1Of(i), M1_), j2 = wrap(lat_.k2Of(i), M2_);
        coeffs[i] = buf_[std::size_t(j2) * std::size_t(M1_) + std::size_t(j1)] * s;
    }
}

void GridTransform::forward(cplx* grid) {
    std::memcpy(static_cast<void*>(buf_), grid, sizeof(cplx) * grid_);
    fftw_execute(reinterpret_cast<fftw_plan>(fwd_));
    std::memcpy(static_cast<void*>(grid), buf_, sizeof(cplx) * grid_);
}

void GridTransform::backward(cplx* grid) {
    std::memcpy(static_cast<void*>(buf_), grid, sizeof(cplx) * grid_);
    fftw_execute(reinterpret_cast<fftw_plan>(bwd_));
    std::memcpy(static_cast<void*>(grid), buf_, sizeof(cplx) * grid_);
}

void forEachTimeSlice(const EvolutionPlan& plan, const SpectralField& phi,
                      const std::function<void(int, const cplx*, GridTransform&, int)>& visit) {
    if (!(phi.lattice == plan.lattice)) throw std::invalid_argument("time slices: lattice mismatch");
    validate(plan);
    const auto h = symbolValues(plan);
    parallelFor(std::size_t(plan.window.samples), plan.threads, [&](std::size_t b, std::size_t e, int worker) {
        GridTransform tf(plan);
        std::vector<cplx> grid(plan.gridSize());
        for (std::size_t s = b; s < e; ++s) {
            tf.toPhysical(phi.coeffs.data(), h.data(), plan.window.time(int(s)), grid.data());
            visit(int(s), grid.data(), tf, worker);
        }
    });
}

SpaceTimeTensor sampleSpaceTime(const EvolutionPlan& plan, const SpectralField& phi) {
    const std::size_t bytes = std::size_t(plan.window.samples) * plan.gridSize() * sizeof(cplx);
    if (bytes > plan.memoryBudgetBytes)
        throw std::length_error("space-time tensor of " + std::to_string(bytes) + " bytes exceeds memory budget");
    SpaceTimeTensor T;
    T.samples = plan.window.samples;
    T.M1 = plan.M1;
    T.M2 = plan.M2;
    for (int s = 0; s < T.samples; ++s) T.times.push_back(plan.window.time(s));
    T.values.resize(std::size_t(T.samples) * plan.gridSize());
    forEachTimeSlice(plan, phi, [&](int s, const cplx* grid, GridTransform&, int) {
        std::copy(grid, grid + plan.gridSize(), T.values.begin() + std::ptrdiff_t(std::size_t(s) * plan.gridSize()));
    });
    return T;
}

SpectralField windowAdjoint(const EvolutionPlan& plan, const SpectralField& phi,
                            const std::function<void(int, cplx*, GridTransform&, int)>& apply) {
    if (!(phi.lattice == plan.lattice)) throw std::invalid_argument("window adjoint: lattice mismatch");
    validate(plan);
    const auto h = symbolValues(plan);
    const auto w = plan.window.weights();
    const std::size_t S = plan.lattice.size(), samples = std::size_t(plan.window.samples);
    const std::size_t blocks = std::min<std::size_t>(samples, 16);
    std::vector<std::vector<cplx>> part(blocks);
    parallelFor(blocks, plan.threads, [&](std::size_t b, std::size_t e, int worker) {
        GridTransform tf(plan);
        std::vector<cplx> grid(plan.gridSize()), c(S);
        for (std::size_t blk = b; blk < e; ++blk) {
            auto& acc = part[blk];
            acc.assign(S, cplx(0.0, 0.0));
            for (std::size_t s = blk * samples / blocks; s < (blk + 1) * samples / blocks; ++s) {
                const double t = plan.window.time(int(s));
                tf.toPhysical(phi.coeffs.data(), h.data(), t, grid.data());
                apply(int(s), grid.data(), tf, worker);
                tf.toSpectral(grid.data(), c.data());
                for (std::size_t k = 0; k < S; ++k) {
                    const double ph = 2.0 * std::numbers::pi * std::fmod(t * h[k], 1.0);
                    acc[k] += w[s] * c[k] * cplx(std::cos(ph), std::sin(ph));
                }
            }
        }
    });
    auto out = SpectralField::zeros(plan.lattice);
    for (const auto& acc : part)
        for (std::size_t k = 0; k < S; ++k) out.coeffs[k] += acc[k];
    return out;
}

}  // namespace wg
