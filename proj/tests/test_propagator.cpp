#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "wg/numeric.hpp"
#include "wg/propagator.hpp"

using namespace wg;

namespace {

cplx e(double z) { return std::polar(1.0, 2.0 * std::numbers::pi * z); }

SpectralField randomField(const FrequencyLattice& lat, Philox& rng) {
    auto f = SpectralField::zeros(lat);
    for (auto& c : f.coeffs) c = rng.complexNormal();
    return f;
}

double maxDiff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
    return m;
}

}  // namespace

TEST_CASE("plan geometry") {
    const auto lat = buildLattice(1, 8, 2, Geometry::RT);
    const auto plan = makePlan(lat, SymbolKind::Hyperbolic);
    CHECK(plan.M1 >= 2 * lat.width1());
    CHECK(plan.M2 >= 2 * lat.width2());
    CHECK(plan.window.samples >= 8 * int(std::ceil(2.0 * 4.0)));
    auto bad = plan;
    bad.M1 = lat.width1();
    CHECK_THROWS(validate(bad));
    bad = plan;
    bad.window.samples = 10;
    CHECK_THROWS(validate(bad));
}

TEST_CASE("single mode multiplier") {
    const auto lat = buildLattice(1, 8, 2, Geometry::RT);
    const auto plan = makePlan(lat, SymbolKind::Hyperbolic);
    const auto phi = SpectralField::singleMode(lat, 8, 2);  // xi = (1,2)
    for (double t : {0.0, 0.1, 0.37, 1.0, -2.5}) {
        const auto out = evolve(plan, phi, t);
        CHECK(std::abs(out.at(8, 2) - e(3.0 * t)) < 1e-14);
    }
    CHECK(evolve(plan, phi, 0.0).coeffs == phi.coeffs);
}

TEST_CASE("unitarity and group law") {
    const auto lat = buildLattice(1, 8, 2, Geometry::RT);
    Philox rng(21, "unitary");
    for (auto kind : {SymbolKind::Hyperbolic, SymbolKind::Elliptic, SymbolKind::Mixed}) {
        const auto plan = makePlan(lat, kind);
        for (int n = 0; n < 100; ++n) {
            const auto phi = randomField(lat, rng);
            const double t = 10.0 * (rng.uniform() - 0.5), s = 10.0 * (rng.uniform() - 0.5);
            CHECK(std::abs(l2Norm(evolve(plan, phi, t)) / l2Norm(phi) - 1.0) < 1e-12);
            const auto a = evolve(plan, evolve(plan, phi, s), t);
            const auto b = evolve(plan, phi, s + t);
            CHECK(maxDiff(a, b) < 1e-12 * 10);
        }
    }
}

TEST_CASE("elliptic and hyperbolic agree on the xi2 = 0 row") {
    const auto lat = buildLattice(1, 8, 2, Geometry::RT);
    Philox rng(4, "row");
    auto phi = SpectralField::zeros(lat);
    for (int k1 = -lat.n1; k1 <= lat.n1; ++k1) phi.at(k1, 0) = rng.complexNormal();
    const auto pe = makePlan(lat, SymbolKind::Elliptic), ph = makePlan(lat, SymbolKind::Hyperbolic);
    CHECK(maxDiff(evolve(pe, phi, 0.73), evolve(ph, phi, 0.73)) == 0.0);
}

TEST_CASE("grid synthesis matches the direct Fourier sum") {
    const auto lat = buildLattice(2, 16, 1, Geometry::RT);
    auto plan = makePlan(lat, SymbolKind::Hyperbolic);
    Philox rng(8, "synth");
    const auto phi = randomField(lat, rng);
    GridTransform tf(plan);
    std::vector<cplx> grid(plan.gridSize());
    const auto h = symbolValues(plan);
    const double t = 0.3;
    tf.toPhysical(phi.coeffs.data(), h.data(), t, grid.data());
    for (int trial = 0; trial < 20; ++trial) {
        const int j1 = int(rng.below(std::uint64_t(plan.M1))), j2 = int(rng.below(std::uint64_t(plan.M2)));
        const double x1 = j1 * lat.L / plan.M1, x2 = j2 * lat.lambda / plan.M2;
        cplx direct = 0.0;
        for (std::size_t i = 0; i < lat.size(); ++i) {
            const double xi1 = lat.xi1(lat.k1Of(i)), xi2 = lat.xi2(lat.k2Of(i));
            direct += phi.coeffs[i] * e(x1 * xi1 + x2 * xi2 - t * h[i]);
        }
        direct *= lat.cellWeight();
        CHECK(std::abs(direct - grid[std::size_t(j2) * std::size_t(plan.M1) + std::size_t(j1)]) < 1e-12);
    }
    std::vector<cplx> back(lat.size());
    tf.toPhysical(phi.coeffs.data(), grid.data());
    tf.toSpectral(grid.data(), back.data());
    for (std::size_t i = 0; i < lat.size(); ++i) CHECK(std::abs(back[i] - phi.coeffs[i]) < 1e-12);
}

TEST_CASE("space-time samples") {
    const auto lat = buildLattice(1, 8, 1, Geometry::RT);
    const auto plan = makePlan(lat, SymbolKind::Hyperbolic);

    const auto zero = sampleSpaceTime(plan, SpectralField::zeros(lat));
    for (auto v : zero.values) CHECK(v == cplx(0.0, 0.0));

    const auto one = sampleSpaceTime(plan, SpectralField::singleMode(lat, 3, 1, cplx(0.6, 0.8)));
    for (auto v : one.values) CHECK(std::abs(std::abs(v) - lat.cellWeight()) < 1e-15);

    // (1,0) and (-1,0) share H = 1
    auto two = SpectralField::singleMode(lat, 8, 0, 1.0);
    two.at(-8, 0) = cplx(0.5, -0.2);
    const auto T = sampleSpaceTime(plan, two);
    for (int s = 0; s < T.samples; s += 7)
        for (int j1 = 0; j1 < T.M1; j1 += 5)
            for (int j2 = 0; j2 < T.M2; ++j2) CHECK(std::abs(std::abs(T.at(s, j1, j2)) - std::abs(T.at(0, j1, j2))) < 1e-14);

    auto tight = plan;
    tight.memoryBudgetBytes = 1024;
    CHECK_THROWS_AS(sampleSpaceTime(tight, two), std::length_error);
}

TEST_CASE("threaded slices are deterministic") {
    const auto lat = buildLattice(1, 8, 2, Geometry::RT);
    auto plan = makePlan(lat, SymbolKind::Hyperbolic);
    Philox rng(9, "threads");
    const auto phi = randomField(lat, rng);
    const auto a = sampleSpaceTime(plan, phi);
    plan.threads = 3;
    const auto b = sampleSpaceTime(plan, phi);
    CHECK(a.values == b.values);
}
