#include "wg/extremizer.hpp"

#include <cmath>
#include <stdexcept>

namespace wg {

std::string toString(StopReason r) {
    switch (r) {
    case StopReason::Tolerance: return "tolerance";
    case StopReason::MaxIter: return "maxIter";
    case StopReason::Stall: return "stall";
    }
    return "?";
}

std::string toString(InitKind k) {
    switch (k) {
    case InitKind::Gaussian: return "gaussian";
    case InitKind::X2Constant: return "x2-constant";
    case InitKind::Hyperbola: return "hyperbola";
    }
    return "?";
}

InitKind initKindFromString(const std::string& s) {
    if (s == "gaussian") return InitKind::Gaussian;
    if (s == "x2-constant") return InitKind::X2Constant;
    if (s == "hyperbola") return InitKind::Hyperbola;
    throw std::invalid_argument("unknown init kind: " + s);
}

namespace {

SpectralField confine(const SpectralField& f, double N, bool meanZero) {
    auto g = project(f, Projection::le(N));
    return meanZero ? project(g, Projection::meanZeroX2()) : g;
}

}  // namespace

FixedPointImage fixedPointImage(const EvolutionPlan& plan, double N, const SpectralField& phi, bool meanZeroX2) {
    if (N > plan.lattice.N) throw std::invalid_argument("extremizer: N above lattice cutoff");
    const std::size_t G = plan.gridSize();
    const double cell = plan.lattice.volume() / double(G);
    const auto w = plan.window.weights();
    std::vector<double> partial(std::size_t(plan.window.samples), 0.0);
    auto img = windowAdjoint(plan, phi, [&](int s, cplx* g, GridTransform&, int) {
        double acc = 0.0;
        for (std::size_t i = 0; i < G; ++i) {
            const double a = std::norm(g[i]);
            acc += a * a;
            g[i] *= a;
        }
        partial[std::size_t(s)] = acc * cell;
    });
    FixedPointImage out;
    for (std::size_t s = 0; s < partial.size(); ++s) out.l4Fourth += w[s] * partial[s];
    out.image = confine(img, N, meanZeroX2);
    return out;
}

ExtremizerTrace extremize(const EvolutionPlan& plan, double N, const SpectralField& init, const ExtremizerOptions& opt) {
    if (!(init.lattice == plan.lattice)) throw std::invalid_argument("extremizer: lattice mismatch");
    if (N > plan.lattice.N) throw std::invalid_argument("extremizer: N above lattice cutoff");
    if (opt.maxIter < 1 || opt.stallWindow < 1 || opt.maxHalvings < 0 || !(opt.tol >= 0.0))
        throw std::invalid_argument("extremizer: bad options");
    auto phi = confine(init, N, opt.meanZeroX2);
    if (phi.isZero()) throw std::invalid_argument("extremizer: init has no content below N");
    phi = normalized(phi);

    ExtremizerTrace tr;
    tr.N = N;
    auto cur = fixedPointImage(plan, N, phi, opt.meanZeroX2);
    if (cur.image.isZero()) throw std::runtime_error("extremizer: zero fixed-point image");
    double ratio = std::pow(cur.l4Fourth, 0.25);
    tr.initialRatio = ratio;
    std::vector<double> accepted{ratio};

    tr.stop = StopReason::MaxIter;
    for (int it = 0; it < opt.maxIter; ++it) {
        const auto target = normalized(cur.image);
        auto cand = target;
        bool ok = false;
        for (int h = 0; h <= opt.maxHalvings; ++h) {
            if (h > 0) {
                auto mix = SpectralField::zeros(plan.lattice);
                for (std::size_t k = 0; k < mix.coeffs.size(); ++k)
                    mix.coeffs[k] = 0.5 * cand.coeffs[k] + 0.5 * phi.coeffs[k];
                if (mix.isZero()) break;
                cand = normalized(mix);
            }
            auto next = fixedPointImage(plan, N, cand, opt.meanZeroX2);
            const double r = std::pow(next.l4Fourth, 0.25);
            const bool accept = r >= ratio && !next.image.isZero();
            tr.iterates.push_back({r, accept, h});
            if (accept) {
                phi = cand;
                cur = std::move(next);
                ratio = r;
                ok = true;
                break;
            }
        }
        if (!ok) {
            tr.stop = StopReason::Stall;
            break;
        }
        accepted.push_back(ratio);
        const auto n = accepted.size();
        if (n > std::size_t(opt.stallWindow)) {
            const double old = accepted[n - 1 - std::size_t(opt.stallWindow)];
            if ((ratio - old) <= opt.tol * ratio) {
                tr.stop = StopReason::Tolerance;
                break;
            }
        }
    }
    tr.final = phi;
    tr.finalRatio = ratio;
    return tr;
}

SpectralField extremizerInit(InitKind kind, const EvolutionPlan& plan, double N, Philox& rng) {
    const auto& lat = plan.lattice;
    auto f = SpectralField::zeros(lat);
    const auto P = Projection::le(N);
    const double sigma = N / 4.0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const int k1 = lat.k1Of(i), k2 = lat.k2Of(i);
        if (!keeps(lat, P, k1, k2)) continue;
        const double x1 = lat.xi1(k1), x2 = lat.xi2(k2);
        switch (kind) {
        case InitKind::Gaussian: f.coeffs[i] = rng.complexNormal(); break;
        case InitKind::X2Constant:
            if (k2 == 0) f.coeffs[i] = std::exp(-x1 * x1 / (2.0 * sigma * sigma));
            break;
        case InitKind::Hyperbola:
            if (std::abs(plan.symbol.eval(x1, x2)) <= 1.0) f.coeffs[i] = rng.complexNormal();
            break;
        }
    }
    return f;
}

ExtremizerBest extremizeBest(const EvolutionPlan& plan, double N, std::uint64_t seed, const std::string& scenario,
                             const ExtremizerOptions& opt) {
    ExtremizerBest out;
    const Philox base(seed, "extremizer-init");
    for (auto kind : {InitKind::Gaussian, InitKind::X2Constant, InitKind::Hyperbola}) {
        auto rng = base.substream(std::uint64_t(kind));
        auto init = extremizerInit(kind, plan, N, rng);
        auto confined = project(init, Projection::le(N));
        if (opt.meanZeroX2) confined = project(confined, Projection::meanZeroX2());
        if (confined.isZero()) continue;
        auto tr = extremize(plan, N, init, opt);
        tr.scenario = scenario;
        tr.init = toString(kind);
        tr.seed = seed;
        if (out.runs.empty() || tr.finalRatio > out.bestRatio) {
            out.best = out.runs.size();
            out.bestRatio = tr.finalRatio;
        }
        out.runs.push_back(std::move(tr));
    }
    if (out.runs.empty()) throw std::invalid_argument("extremizer: every init is degenerate");
    return out;
}

double extremizerIterationCost(const EvolutionPlan& plan) {
    const double G = double(plan.gridSize());
    return 2.0 * double(plan.window.samples) * 5.0 * G * std::log2(std::max(G, 2.0));
}

}  // namespace wg
