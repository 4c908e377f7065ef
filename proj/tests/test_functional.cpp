#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "wg/functional.hpp"
#include "wg/numeric.hpp"

using namespace wg;

namespace {

SpectralField randomSupport(const FrequencyLattice& lat, Philox& rng, int count, bool dyadic) {
    auto f = SpectralField::zeros(lat);
    std::set<std::size_t> used;
    while (int(used.size()) < count) used.insert(std::size_t(rng.below(lat.size())));
    for (auto i : used)
        f.coeffs[i] = dyadic ? double(1 + rng.below(64)) / 16.0 : std::ldexp(rng.uniform(), int(rng.below(7)) - 3);
    return f;
}

SpectralField randomModes(const FrequencyLattice& lat, Philox& rng, int count) {
    auto f = SpectralField::zeros(lat);
    for (int n = 0; n < count; ++n) f.coeffs[std::size_t(rng.below(lat.size()))] = rng.complexNormal();
    return f;
}

QuadWeight restricted(QuadWeight::Restriction r, double theta = 1.0) {
    QuadWeight q;
    q.restriction = r;
    q.theta = theta;
    return q;
}

}  // namespace

TEST_CASE("l4 norm closed forms") {
    const auto lat = buildLattice(1, 8, 2, Geometry::RT);
    const auto plan = makePlan(lat, SymbolKind::Hyperbolic);
    CHECK(l4SpaceTimeNorm(plan, SpectralField::zeros(lat)) == 0.0);
    const auto one = SpectralField::singleMode(lat, 5, -1);
    const double expect = std::pow(1.0 * lat.L * lat.lambda, 0.25) * lat.cellWeight();
    CHECK(l4SpaceTimeNorm(plan, one) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(strichartzRatio(plan, one) > 0.0);
    CHECK_THROWS(strichartzRatio(plan, SpectralField::zeros(lat)));
}

TEST_CASE("ratio is scale invariant") {
    const auto lat = buildLattice(1, 8, 2, Geometry::RT);
    const auto plan = makePlan(lat, SymbolKind::Hyperbolic);
    Philox rng(2, "scale");
    const auto phi = randomModes(lat, rng, 12);
    const double r = strichartzRatio(plan, phi);
    for (cplx c : {cplx(3.0, 0.0), cplx(-0.25, 1.5), cplx(1e-3, 0.0)})
        CHECK(std::abs(strichartzRatio(plan, phi.scaled(c)) / r - 1.0) < 1e-12);
}

TEST_CASE("sharp-window l4 against the direct quadrilinear sum") {
    const auto lat = buildLattice(1, 8, 4, Geometry::RT);
    Philox rng(17, "five-mode");
    for (int trial = 0; trial < 5; ++trial) {
        const auto phi = randomModes(lat, rng, 5);
        for (auto kind : {SymbolKind::Hyperbolic, SymbolKind::Elliptic, SymbolKind::Mixed}) {
            const auto plan = makePlan(lat, kind);
            const double ref = oracle::l4FourthDirect(phi, plan.window, kind);
            CHECK(std::abs(l4Fourth(plan, phi) / ref - 1.0) < 1e-3);
        }
    }
}

TEST_CASE("smooth-window identity") {
    const auto lat = buildLattice(1, 8, 2, Geometry::RT);
    const double T = 64.0;
    auto plan = makePlan(lat, SymbolKind::Hyperbolic, TimeWindow::smooth(T, minTimeSamples(lat.N, -T, T) + 1));
    Philox rng(23, "smooth");
    for (int trial = 0; trial < 6; ++trial) {
        const auto phi = randomModes(lat, rng, 1 + int(rng.below(10)));
        const double ref = oracle::l4FourthDirect(phi, plan.window, SymbolKind::Hyperbolic);
        CHECK(std::abs(l4Fourth(plan, phi) / ref - 1.0) < 1e-6);

        // nonnegative coefficients: the quadrilinear form with the bump constraint at theta = 1/2
        const auto f = phi.modulus();
        QuadWeight q;
        q.constraint = QuadWeight::Constraint::SmoothBump;
        q.theta = 0.5;
        const double viaQuad = smoothBumpHat(0.0) * quadForm(f, q);
        CHECK(std::abs(l4Fourth(plan, f) / viaQuad - 1.0) < 1e-6);
    }
}

TEST_CASE("quadForm single point and hand-enumerated supports") {
    const auto lat = buildLattice(1, 8, 2, Geometry::RT);
    const double cw = lat.cellWeight();
    CHECK(quadForm(SpectralField::singleMode(lat, 0, 0, 1.0), QuadWeight{}) == cw * cw * cw);

    // two points: all six admissible triples have H(v) = H(w)
    auto two = SpectralField::zeros(lat);
    two.at(3, 1) = 2.0;
    two.at(-5, 0) = 0.5;
    const double a = 2.0, b = 0.5;
    CHECK(quadForm(two, QuadWeight{}) == doctest::Approx((a * a * a * a + b * b * b * b + 4 * a * a * b * b) * cw * cw * cw));

    // collinear triple p = c + d, q = c - d with |H(d)| > 1: pairings (p,q | c,c) drop out
    auto three = SpectralField::zeros(lat);
    const int c1 = 0, c2 = 0, d1 = 4, d2 = 2;  // d = (0.5, 2), H(d) = -3.75
    three.at(c1 + d1, c2 + d2) = 1.0;
    three.at(c1 - d1, c2 - d2) = 1.0;
    three.at(c1, c2) = 1.0;
    // with theta large every triple counts; with theta = 1 the four (v=+-d, w=0) and
    // four (v=0, w=+-d) triples vanish
    QuadWeight wide;
    wide.theta = 100.0;
    const double all = quadForm(three, wide) / (cw * cw * cw);
    const double narrow = quadForm(three, QuadWeight{}) / (cw * cw * cw);
    CHECK(all - narrow == 4.0);
    CHECK(oracle::quadFormBruteForce(three, QuadWeight{}) == quadForm(three, QuadWeight{}));
}

TEST_CASE("partition identity, exact on dyadic data") {
    const auto lat = buildLattice(1, 8, 8, Geometry::RT);
    Philox rng(31, "partition");
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = randomSupport(lat, rng, 20, true);
        for (double theta : {0.5, 1.0, 2.0}) {
            const double none = quadForm(f, restricted(QuadWeight::Restriction::None, theta));
            const double a1 = quadForm(f, restricted(QuadWeight::Restriction::A1, theta));
            const double a2 = quadForm(f, restricted(QuadWeight::Restriction::A2plain, theta));
            CHECK(none == a1 + a2);
        }
    }
}

TEST_CASE("partition identity, general data to rounding") {
    const auto lat = buildLattice(2, 16, 4, Geometry::RT);
    Philox rng(32, "partition-general");
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = randomSupport(lat, rng, 25, false);
        const double none = quadForm(f, restricted(QuadWeight::Restriction::None));
        const double split = quadForm(f, restricted(QuadWeight::Restriction::A1)) +
                             quadForm(f, restricted(QuadWeight::Restriction::A2plain));
        CHECK(std::abs(none - split) <= 2e-16 * none);
    }
}

TEST_CASE("quadForm matches the brute-force oracle bit for bit") {
    Philox rng(41, "oracle");
    for (int trial = 0; trial < 12; ++trial) {
        const double lambda = trial % 2 ? 2.0 : 1.0;
        const auto lat = buildLattice(lambda, 8.0 * lambda, 1, Geometry::RT);
        const auto f = randomSupport(lat, rng, 1 + int(rng.below(30)), false);
        QuadWeight q;
        const auto kinds = {QuadWeight::Restriction::None, QuadWeight::Restriction::A1, QuadWeight::Restriction::A2plain,
                            QuadWeight::Restriction::A2refined};
        for (auto r : kinds) {
            q.restriction = r;
            q.theta = 0.25 + rng.uniform();
            q.octant = {rng.below(2) ? 1 : -1, rng.below(2) ? 1 : -1, rng.below(2) ? 1 : -1};
            CHECK(quadForm(f, q) == oracle::quadFormBruteForce(f, q));
        }
        q.restriction = QuadWeight::Restriction::None;
        q.constraint = QuadWeight::Constraint::SmoothBump;
        CHECK(quadForm(f, q) == oracle::quadFormBruteForce(f, q));
    }
}

TEST_CASE("quadForm symmetries and determinism") {
    const auto lat = buildLattice(1, 8, 4, Geometry::RT);
    Philox rng(43, "sym");
    const auto f = randomSupport(lat, rng, 40, false);
    auto reflected = SpectralField::zeros(lat);
    for (std::size_t i = 0; i < lat.size(); ++i) reflected.at(-lat.k1Of(i), -lat.k2Of(i)) = f.coeffs[i];
    auto flipped = SpectralField::zeros(lat);
    for (std::size_t i = 0; i < lat.size(); ++i) flipped.at(-lat.k1Of(i), lat.k2Of(i)) = f.coeffs[i];
    for (auto r : {QuadWeight::Restriction::None, QuadWeight::Restriction::A1, QuadWeight::Restriction::A2plain}) {
        const auto q = restricted(r);
        const double base = quadForm(f, q);
        CHECK(quadForm(reflected, q) == base);
        CHECK(quadForm(flipped, q) == base);
        QuadFormOptions threaded;
        threaded.threads = 3;
        CHECK(quadForm(f, q, threaded) == base);
    }
}

TEST_CASE("k-decomposition sits between the theta = 1 and theta = 2 forms") {
    const auto lat = buildLattice(1, 8, 4, Geometry::RT);
    Philox rng(47, "kdec");
    for (int trial = 0; trial < 5; ++trial) {
        const auto f = randomSupport(lat, rng, 30, false);
        const double k = quadFormKDecomposition(f);
        CHECK(quadForm(f, restricted(QuadWeight::Restriction::None, 1.0)) <= k * (1 + 1e-12));
        CHECK(k <= 3.0 * quadForm(f, restricted(QuadWeight::Restriction::None, 2.0)) * (1 + 1e-12));
        CHECK(quadFormA2RefinedSum(f, QuadWeight{}) >= 0.0);
    }
}

TEST_CASE("quadForm guards and bound record") {
    const auto lat = buildLattice(1, 8, 4, Geometry::RT);
    Philox rng(53, "guard");
    const auto f = randomSupport(lat, rng, 50, false);
    QuadFormOptions tight;
    tight.tripleBudget = 1000;
    CHECK_THROWS_AS(quadForm(f, QuadWeight{}, tight), std::length_error);
    auto neg = f;
    neg.coeffs[0] = -1.0;
    CHECK_THROWS(quadForm(neg, QuadWeight{}));

    const auto one = normalized(SpectralField::singleMode(lat, 1, 1, 3.0));
    for (double C : {1.0, 2.0, 10.0}) {
        const auto b = quadFormBound(one, QuadWeight{}, C);
        CHECK(b.ratio <= C);
        CHECK(b.bound == doctest::Approx(C));
    }
}

TEST_CASE("growth fits") {
    std::vector<double> N, R, Rl;
    for (double n = 8; n <= 1024; n *= 2) {
        N.push_back(n);
        R.push_back(std::pow(n, 0.25));
        Rl.push_back(std::pow(std::log(n), 0.25));
    }
    CHECK(std::abs(fitGrowth(N, R).powerExponent - 0.25) < 1e-6);
    const auto g = fitGrowth(N, Rl);
    CHECK(g.logCoefficient == doctest::Approx(1.0).epsilon(1e-9));
    std::vector<double> N2, R2;
    for (double n = 1 << 20; n <= double(1 << 26); n *= 2) {
        N2.push_back(n);
        R2.push_back(std::pow(std::log(n), 0.25));
    }
    CHECK(fitGrowth(N2, R2).powerExponent < g.powerExponent);
    CHECK_THROWS(fitGrowth({8, 8, 8, 8}, {1, 2, 3, 4}));
    CHECK_THROWS(fitGrowth({8, 16, 32}, {1, 2, 3}));
}
