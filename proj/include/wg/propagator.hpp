#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "wg/lattice.hpp"

namespace wg {

struct EvolutionPlan {
    DispersionSymbol symbol;
    TimeWindow window;
    int M1 = 0;  // physical grid, x1 direction
    int M2 = 0;  // physical grid, x2 direction
    FrequencyLattice lattice;
    std::size_t memoryBudgetBytes = std::size_t(1) << 31;
    int threads = 1;

    std::size_t gridSize() const { return std::size_t(M1) * std::size_t(M2); }
};

// Grid sizes default to the smallest FFT-friendly sizes >= 2 * lattice width.
// Sample count defaults to minTimeSamples for the lattice cutoff.
EvolutionPlan makePlan(const FrequencyLattice& lat, SymbolKind kind, TimeWindow window);
EvolutionPlan makePlan(const FrequencyLattice& lat, SymbolKind kind, double t0 = 0.0, double t1 = 1.0);
void validate(const EvolutionPlan& plan);

std::vector<double> symbolValues(const EvolutionPlan& plan);

// multiply coefficients by e(-t H(xi))
SpectralField evolve(const EvolutionPlan& plan, const SpectralField& phi, double t);

// Moves a lattice field to and from the physical grid.
//   u(x) = (1/(L lambda)) sum_xi c(xi) e(x.xi),  x_j = (j1 L/M1, j2 lambda/M2)
// Instances own FFTW buffers; one per thread.
class GridTransform {
public:
    explicit GridTransform(const EvolutionPlan& plan);
    ~GridTransform();
    GridTransform(const GridTransform&) = delete;
    GridTransform& operator=(const GridTransform&) = delete;

    // coefficients times e(-t H) synthesised on the grid
    void toPhysical(const cplx* coeffs, const double* symbol, double t, cplx* grid);
    void toPhysical(const cplx* coeffs, cplx* grid) { toPhysical(coeffs, nullptr, 0.0, grid); }
    // lattice coefficients of a grid function (exact projection for band-limited input)
    void toSpectral(const cplx* grid, cplx* coeffs);
    // unnormalized in-place DFTs of a whole grid, backward(forward(g)) = gridSize() g
    void forward(cplx* grid);
    void backward(cplx* grid);

    std::size_t gridSize() const { return grid_; }

private:
    const FrequencyLattice lat_;
    int M1_, M2_;
    std::size_t grid_;
    cplx* buf_ = nullptr;
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
};

struct SpaceTimeTensor {
    int samples = 0, M1 = 0, M2 = 0;
    std::vector<double> times;
    std::vector<cplx> values;  // [sample][j2][j1]

    cplx at(int s, int j1, int j2) const {
        return values[(std::size_t(s) * std::size_t(M2) + std::size_t(j2)) * std::size_t(M1) + std::size_t(j1)];
    }
};

SpaceTimeTensor sampleSpaceTime(const EvolutionPlan& plan, const SpectralField& phi);

// Visits u(t_j, .) for every window sample. The visitor gets the sample index and
// the grid; it runs on worker threads, with one GridTransform per worker.
void forEachTimeSlice(const EvolutionPlan& plan, const SpectralField& phi,
                      const std::function<void(int sample, const cplx* grid, GridTransform& tf, int worker)>& visit);

// sum_j w_j e(+t_j H) * coefficients of F_j, where the callback overwrites the grid
// u(t_j, .) with F_j. Samples are accumulated in fixed blocks and the blocks summed
// in order, so the result does not depend on plan.threads.
SpectralField windowAdjoint(const EvolutionPlan& plan, const SpectralField& phi,
                            const std::function<void(int sample, cplx* grid, GridTransform& tf, int worker)>& apply);

}  // namespace wg
