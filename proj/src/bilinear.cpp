#include "wg/bilinear.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "wg/measure.hpp"

namespace wg {

namespace {

bool isDyadic(double N) {
    if (!(N >= 1.0)) return false;
    int e = 0;
    return std::frexp(N, &e) == 0.5;
}

SpectralField projectChecked(const SpectralField& phi, double N, const char* which) {
    auto p = project(phi, Projection::at(N));
    if (p.isZero() && !phi.isZero())
        throw std::invalid_argument(std::string("bilinear: ") + which + " has no content in its dyadic shell");
    return p;
}

SpectralField gaussianShell(const FrequencyLattice& lat, double N, Philox& rng) {
    auto f = SpectralField::zeros(lat);
    const auto P = Projection::at(N);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        if (keeps(lat, P, lat.k1Of(i), lat.k2Of(i))) f.coeffs[i] = rng.complexNormal();
    return f;
}

double ratioOf(const BilinearConfig& cfg, const SpectralField& a, const SpectralField& b) {
    return bilinearNormRaw(cfg.plan, a, b) / (l2Norm(a) * l2Norm(b));
}

}  // namespace

BilinearConfig makeBilinearConfig(double N1, double N2, double lambda, double L, SymbolKind kind) {
    BilinearConfig cfg;
    cfg.N1 = N1;
    cfg.N2 = N2;
    cfg.lambda = lambda;
    if (L <= 0.0) L = 8.0 * std::max(lambda, 1.0);
    cfg.plan = makePlan(buildLattice(lambda, L, N1, Geometry::RT), kind, 0.0, 1.0);
    validate(cfg);
    return cfg;
}

void validate(const BilinearConfig& cfg) {
    if (!isDyadic(cfg.N1) || !isDyadic(cfg.N2)) throw std::invalid_argument("bilinear: N1, N2 must be dyadic");
    if (cfg.N1 < 4.0 * cfg.N2) throw std::invalid_argument("bilinear: need N1 >= 4 N2");
    if (cfg.plan.lattice.N < cfg.N1) throw std::invalid_argument("bilinear: lattice cutoff below N1");
    if (cfg.plan.lattice.lambda != cfg.lambda) throw std::invalid_argument("bilinear: lambda differs from lattice");
    if (cfg.ensembleSize < 1) throw std::invalid_argument("bilinear: empty ensemble");
    if (cfg.refineSteps < 0) throw std::invalid_argument("bilinear: negative refineSteps");
    validate(cfg.plan);
}

double bilinearBound(double N1, double N2, double lambda) { return std::sqrt(1.0 / lambda + N2 / N1); }

double bilinearNormRaw(const EvolutionPlan& plan, const SpectralField& a, const SpectralField& b) {
    if (!(b.lattice == plan.lattice)) throw std::invalid_argument("bilinear: lattice mismatch");
    if (a.isZero() || b.isZero()) return 0.0;
    const auto h = symbolValues(plan);
    const auto w = plan.window.weights();
    const std::size_t G = plan.gridSize();
    const double cell = plan.lattice.volume() / double(G);
    std::vector<std::vector<cplx>> second(static_cast<std::size_t>(std::max(plan.threads, 1)));
    std::vector<double> partial(std::size_t(plan.window.samples), 0.0);
    forEachTimeSlice(plan, a, [&](int s, const cplx* g1, GridTransform& tf, int worker) {
        auto& g2 = second[std::size_t(worker)];
        g2.resize(G);
        tf.toPhysical(b.coeffs.data(), h.data(), plan.window.time(s), g2.data());
        double acc = 0.0;
        for (std::size_t i = 0; i < G; ++i) acc += std::norm(g1[i]) * std::norm(g2[i]);
        partial[std::size_t(s)] = acc * cell;
    });
    double total = 0.0;
    for (std::size_t s = 0; s < partial.size(); ++s) total += w[s] * partial[s];
    return std::sqrt(std::max(total, 0.0));
}

double bilinearNorm(const BilinearConfig& cfg, const SpectralField& phi1, const SpectralField& phi2) {
    validate(cfg);
    if (!(phi1.lattice == cfg.plan.lattice) || !(phi2.lattice == cfg.plan.lattice))
        throw std::invalid_argument("bilinear: lattice mismatch");
    const auto a = projectChecked(phi1, cfg.N1, "phi1");
    const auto b = projectChecked(phi2, cfg.N2, "phi2");
    return bilinearNormRaw(cfg.plan, a, b);
}

namespace {

// gradient of the squared norm in the first argument, projected to the shell of N
SpectralField ascentStep(const EvolutionPlan& plan, const SpectralField& a, const SpectralField& b, double N) {
    const auto h = symbolValues(plan);
    const std::size_t G = plan.gridSize();
    std::vector<std::vector<cplx>> second(static_cast<std::size_t>(std::max(plan.threads, 1)));
    auto g = windowAdjoint(plan, a, [&](int s, cplx* g1, GridTransform& tf, int worker) {
        auto& g2 = second[std::size_t(worker)];
        g2.resize(G);
        tf.toPhysical(b.coeffs.data(), h.data(), plan.window.time(s), g2.data());
        for (std::size_t i = 0; i < G; ++i) g1[i] *= std::norm(g2[i]);
    });
    g = project(g, Projection::at(N));
    if (g.isZero()) return a;
    return normalized(g);
}

}  // namespace

SpectralField bilinearAscent(const BilinearConfig& cfg, const SpectralField& phi1, const SpectralField& phi2) {
    validate(cfg);
    const auto a = projectChecked(phi1, cfg.N1, "phi1");
    const auto b = projectChecked(phi2, cfg.N2, "phi2");
    if (a.isZero() || b.isZero()) throw std::invalid_argument("bilinear ascent: zero field");
    return ascentStep(cfg.plan, a, b, cfg.N1);
}

BilinearSample bilinearEnsemble(const BilinearConfig& cfg) {
    validate(cfg);
    BilinearSample out;
    out.N1 = cfg.N1;
    out.N2 = cfg.N2;
    out.lambda = cfg.lambda;
    out.bound = bilinearBound(cfg.N1, cfg.N2, cfg.lambda);
    const Philox base(cfg.seed, "bilinear-ensemble");
    const auto& lat = cfg.plan.lattice;
    for (int m = 0; m < cfg.ensembleSize; ++m) {
        auto rng = base.substream(std::uint64_t(m));
        auto a = gaussianShell(lat, cfg.N1, rng);
        auto b = gaussianShell(lat, cfg.N2, rng);
        if (a.isZero() || b.isZero()) throw std::invalid_argument("bilinear ensemble: empty dyadic shell");
        a = normalized(a);
        b = normalized(b);
        double r = ratioOf(cfg, a, b);
        out.ensembleMax = std::max(out.ensembleMax, r);
        for (int k = 0; k < cfg.refineSteps; ++k) {
            a = ascentStep(cfg.plan, a, b, cfg.N1);
            b = ascentStep(cfg.plan, b, a, cfg.N2);
        }
        if (cfg.refineSteps > 0) r = ratioOf(cfg, a, b);
        out.refined = std::max(out.refined, r);
    }
    return out;
}

namespace {

struct FitData {
    std::vector<double> r, il, s2;  // N2/N1, 1/lambda, value^2
};

// best nonnegative (A, B) for fixed exponents; returns relative residual sum of squares
double projectLinear(const FitData& d, double p, double q, double& A, double& B) {
    const std::size_t n = d.s2.size();
    std::vector<double> f(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = std::pow(d.r[i], 2.0 * p) / d.s2[i];
        g[i] = std::pow(d.il[i], 2.0 * q) / d.s2[i];
    }
    double ff = 0, fg = 0, gg = 0, f1 = 0, g1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ff += f[i] * f[i];
        fg += f[i] * g[i];
        gg += g[i] * g[i];
        f1 += f[i];
        g1 += g[i];
    }
    auto rss = [&](double a, double b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = a * f[i] + b * g[i] - 1.0;
            s += e * e;
        }
        return s;
    };
    const double det = ff * gg - fg * fg;
    double a = -1, b = -1;
    if (det > 1e-300 * std::max(1.0, ff * gg)) {
        a = (f1 * gg - g1 * fg) / det;
        b = (g1 * ff - f1 * fg) / det;
    }
    if (a >= 0 && b >= 0) {
        A = a;
        B = b;
        return rss(a, b);
    }
    const double aOnly = ff > 0 ? f1 / ff : 0.0, bOnly = gg > 0 ? g1 / gg : 0.0;
    const double ra = rss(aOnly, 0.0), rb = rss(0.0, bOnly);
    if (ra <= rb) {
        A = aOnly;
        B = 0.0;
        return ra;
    }
    A = 0.0;
    B = bOnly;
    return rb;
}

double objective(const gsl_vector* x, void* params) {
    const auto* d = static_cast<const FitData*>(params);
    double A, B;
    return projectLinear(*d, gsl_vector_get(x, 0), gsl_vector_get(x, 1), A, B);
}

}  // namespace

BilinearFit bilinearScalingFit(const std::vector<BilinearPoint>& points) {
    FitData d;
    std::set<double> ratios, lambdas;
    for (const auto& p : points) {
        if (!(p.N1 > 0 && p.N2 > 0 && p.lambda > 0 && p.value > 0 && std::isfinite(p.value)))
            throw std::invalid_argument("bilinear fit: points need positive finite entries");
        d.r.push_back(p.N2 / p.N1);
        d.il.push_back(1.0 / p.lambda);
        d.s2.push_back(p.value * p.value);
        ratios.insert(p.N2 / p.N1);
        lambdas.insert(p.lambda);
    }
    if (ratios.size() < 4 || lambdas.size() < 4)
        throw std::invalid_argument("bilinear fit: need >= 4 grid values of N2/N1 and of lambda");

    std::vector<double> xr, yr, xl, yl;
    for (std::size_t i = 0; i < d.s2.size(); ++i) {
        if (d.r[i] >= 2.0 * d.il[i]) {
            xr.push_back(std::log(d.r[i]));
            yr.push_back(0.5 * std::log(d.s2[i]));
        } else if (d.il[i] >= 2.0 * d.r[i]) {
            xl.push_back(std::log(d.il[i]));
            yl.push_back(0.5 * std::log(d.s2[i]));
        }
    }
    auto distinct = [](const std::vector<double>& v) { return std::set<double>(v.begin(), v.end()).size(); };
    if (distinct(xr) < 2 || distinct(xl) < 2)
        throw std::invalid_argument("bilinear fit: a scaling regime has fewer than 2 distinct abscissae");

    BilinearFit fit;
    fit.regimePointsRatio = int(xr.size());
    fit.regimePointsLambda = int(xl.size());
    fit.regimeSlopeRatio = fitLine(xr, yr).slope;
    fit.regimeSlopeLambda = fitLine(xl, yl).slope;

    gsl_multimin_function fn{&objective, 2, &d};
    gsl_vector* x = gsl_vector_alloc(2);
    gsl_vector* step = gsl_vector_alloc(2);
    double bestF = std::numeric_limits<double>::infinity(), bestP = 0, bestQ = 0;
    // restarts from a small grid of starting exponents
    for (double p0 : {0.25, 0.75})
        for (double q0 : {0.25, 0.75}) {
            gsl_vector_set(x, 0, std::max(fit.regimeSlopeRatio, 0.0) * 0.5 + p0 * 0.5);
            gsl_vector_set(x, 1, std::max(fit.regimeSlopeLambda, 0.0) * 0.5 + q0 * 0.5);
            gsl_vector_set_all(step, 0.1);
            gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
            gsl_multimin_fminimizer_set(m, &fn, x, step);
            for (int it = 0; it < 5000; ++it) {
                if (gsl_multimin_fminimizer_iterate(m)) break;
                if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-12) == GSL_SUCCESS) break;
            }
            if (m->fval < bestF) {
                bestF = m->fval;
                bestP = gsl_vector_get(m->x, 0);
                bestQ = gsl_vector_get(m->x, 1);
            }
            gsl_multimin_fminimizer_free(m);
        }
    gsl_vector_free(step);
    gsl_vector_free(x);

    fit.exponentRatio = bestP;
    fit.exponentLambda = bestQ;
    projectLinear(d, bestP, bestQ, fit.A, fit.B);
    for (std::size_t i = 0; i < d.s2.size(); ++i) {
        const double model = std::sqrt(fit.A * std::pow(d.r[i], 2 * bestP) + fit.B * std::pow(d.il[i], 2 * bestQ));
        const double v = std::sqrt(d.s2[i]);
        fit.residuals.push_back(v - model);
        fit.maxRelResidual = std::max(fit.maxRelResidual, std::abs(v - model) / v);
    }
    return fit;
}

double eabMeasure(Vec2 a, Vec2 b, double lambda, double thetaRes, double N1, double N2, const MeasureOptions& opt) {
    const double na = std::hypot(a.x, a.y), nb = std::hypot(b.x, b.y);
    if (N1 <= 0.0) N1 = na;
    if (N2 <= 0.0) N2 = nb;
    if (!(lambda >= 1.0)) throw std::invalid_argument("eab: lambda must be >= 1");
    if (!(N2 > 0.0)) throw std::invalid_argument("eab: b must be nonzero");
    if (na > 2.0 * N1 || na < N1 / 2.0) throw std::invalid_argument("eab: |a| not comparable to N1");
    if (nb > 2.0 * N2 || nb < N2 / 2.0) throw std::invalid_argument("eab: |b| not comparable to N2");
    return rzMeasure(eabSet(a, b, thetaRes, N2), lambda, opt);
}

std::pair<Vec2, Vec2> sampleEabPair(Philox& rng, double N1, double N2, double lambda) {
    auto onLattice = [&](double v) { return std::round(v * lambda) / lambda; };
    Vec2 a, b;
    const double s = rng.uniform() < 0.5 ? -1.0 : 1.0;
    a.x = s * (N1 / 2.0 + rng.uniform() * N1 / 2.0);
    a.y = onLattice((2.0 * rng.uniform() - 1.0) * N1 / 2.0);
    for (;;) {
        b.x = (2.0 * rng.uniform() - 1.0) * N2;
        b.y = onLattice((2.0 * rng.uniform() - 1.0) * N2);
        const double nb = std::hypot(b.x, b.y);
        if (nb >= N2 / 2.0 && nb <= N2) break;
    }
    return {a, b};
}

EabSweepPoint eabSweep(double N1, double N2, double lambda, int draws, std::uint64_t seed, double thetaRes,
                       const MeasureOptions& opt) {
    if (draws < 0) throw std::invalid_argument("eab sweep: negative draws");
    EabSweepPoint out;
    out.N1 = N1;
    out.N2 = N2;
    out.lambda = lambda;
    out.bound = 1.0 / lambda + N2 / N1;
    std::vector<std::pair<Vec2, Vec2>> pairs{{{N1, 0.0}, {N2, 0.0}}, {{N1, 0.0}, {0.0, N2}}};
    Philox rng(seed, "eab-sweep");
    for (int i = 0; i < draws; ++i) pairs.push_back(sampleEabPair(rng, N1, N2, lambda));
    for (const auto& [a, b] : pairs) {
        const auto set = eabSet(a, b, thetaRes, N2);
        const auto prof = sliceProfile(set, lambda, opt);
        double m = 0.0;
        for (double l : prof.length) m += l;
        m /= lambda;
        out.maxMeasure = std::max(out.maxMeasure, m);
        out.maxSlice = std::max(out.maxSlice, prof.maxSlice);
    }
    out.ratio = out.maxMeasure / out.bound;
    return out;
}

}  // namespace wg
