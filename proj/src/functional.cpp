#include "wg/functional.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <stdexcept>

#include "wg/numeric.hpp"

namespace wg {

double l4Fourth(const EvolutionPlan& plan, const SpectralField& phi) {
    const auto w = plan.window.weights();
    std::vector<double> partial(std::size_t(plan.window.samples), 0.0);
    const double cell = plan.lattice.volume() / double(plan.gridSize());
    forEachTimeSlice(plan, phi, [&](int s, const cplx* grid, GridTransform&, int) {
        double acc = 0.0;
        for (std::size_t i = 0; i < plan.gridSize(); ++i) {
            const double a = std::norm(grid[i]);
            acc += a * a;
        }
        partial[std::size_t(s)] = acc * cell;
    });
    double total = 0.0;
    for (std::size_t s = 0; s < partial.size(); ++s) total += w[s] * partial[s];
    return total;
}

double l4SpaceTimeNorm(const EvolutionPlan& plan, const SpectralField& phi) {
    return std::pow(std::max(0.0, l4Fourth(plan, phi)), 0.25);
}

double strichartzRatio(const EvolutionPlan& plan, const SpectralField& phi) {
    const double n = l2Norm(phi);
    if (!(n > 0.0)) throw std::invalid_argument("strichartzRatio: zero field");
    return l4SpaceTimeNorm(plan, phi) / n;
}

std::string toString(QuadWeight::Restriction r) {
    switch (r) {
    case QuadWeight::Restriction::None: return "none";
    case QuadWeight::Restriction::A1: return "A1";
    case QuadWeight::Restriction::A2plain: return "A2plain";
    case QuadWeight::Restriction::A2refined: return "A2refined";
    }
    return "?";
}

double quadBump(double s) {
    static const double peak = smoothBumpHat(0.0);
    return smoothBumpHat(s) / peak;
}

namespace {

struct Support {
    std::vector<int> k1, k2;
    std::vector<double> f;
};

Support supportOf(const SpectralField& f) {
    Support s;
    const auto& lat = f.lattice;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const cplx c = f.coeffs[i];
        if (c.imag() != 0.0 || c.real() < 0.0 || !std::isfinite(c.real()))
            throw std::invalid_argument("quadForm: f must be real and nonnegative");
        if (c.real() > 0.0) {
            s.k1.push_back(lat.k1Of(i));
            s.k2.push_back(lat.k2Of(i));
            s.f.push_back(c.real());
        }
    }
    return s;
}

bool inOctant(const DispersionSymbol& H, double x1, double x2, const std::array<int, 3>& j) {
    return j[0] * x1 >= 0.0 && j[1] * x2 >= 0.0 && j[2] * H.eval(x1, x2) >= 0.0;
}

// weight of one (v,w) pair, 0 when filtered out
double pairWeight(const DispersionSymbol& H, const QuadWeight& q, double v1, double v2, double w1, double w2) {
    const double hv = H.eval(v1, v2), hw = H.eval(w1, w2);
    const double diff = hv - hw;
    const bool refined = q.restriction == QuadWeight::Restriction::A2refined;
    const double theta = refined ? q.theta2 : q.theta;
    double c;
    if (q.constraint == QuadWeight::Constraint::Indicator) {
        if (!(std::abs(diff) <= theta)) return 0.0;
        c = 1.0;
    } else {
        c = quadBump(diff / theta);
        if (c == 0.0) return 0.0;
    }
    if (q.restriction == QuadWeight::Restriction::None) return c;
    const double hvw = H.evalBilinear(v1, v2, w1, w2);
    const bool small = hvw * hvw <= q.cA * std::abs(hv * hw);
    switch (q.restriction) {
    case QuadWeight::Restriction::A1: return small ? c : 0.0;
    case QuadWeight::Restriction::A2plain: return small ? 0.0 : c;
    case QuadWeight::Restriction::A2refined:
        if (small) return 0.0;
        return inOctant(H, v1, v2, q.octant) && inOctant(H, w1, w2, q.octant) ? c : 0.0;
    default: return 0.0;
    }
}

}  // namespace

double quadForm(const SpectralField& f, const QuadWeight& weight, const QuadFormOptions& opt) {
    const auto S = supportOf(f);
    const std::size_t n = S.f.size();
    if (double(n) * double(n) * double(n) > opt.tripleBudget)
        throw std::length_error("quadForm: support^3 exceeds triple budget");
    const auto& lat = f.lattice;
    const DispersionSymbol H{opt.symbol};
    const double twoL = 2.0 * lat.L, twoLam = 2.0 * lat.lambda;
    const bool smooth = weight.constraint == QuadWeight::Constraint::SmoothBump;

    std::vector<ExactSum> parts(std::size_t(std::max(opt.threads, 1)));
    parallelFor(n, opt.threads, [&](std::size_t b, std::size_t e, int worker) {
        ExactSum& acc = parts[std::size_t(worker)];
        for (std::size_t a = b; a < e; ++a) {
            for (std::size_t g = 0; g < n; ++g) {
                // xi = S[a], gamma = S[g]: v = (xi - gamma)/2
                const int d1 = S.k1[a] - S.k1[g], d2 = S.k2[a] - S.k2[g];
                const int s1 = S.k1[a] + S.k1[g], s2 = S.k2[a] + S.k2[g];
                const double v1 = d1 / twoL, v2 = d2 / twoLam;
                for (std::size_t c = 0; c < n; ++c) {
                    // eta = S[c], h = xi + gamma - eta: w = (eta - h)/2
                    const int h1 = s1 - S.k1[c], h2 = s2 - S.k2[c];
                    if (!lat.contains(h1, h2)) continue;
                    const double fh = f.coeffs[lat.index(h1, h2)].real();
                    if (fh == 0.0) continue;
                    const double w1 = (S.k1[c] - h1) / twoL, w2 = (S.k2[c] - h2) / twoLam;
                    const double pw = pairWeight(H, weight, v1, v2, w1, w2);
                    if (pw == 0.0) continue;
                    if (smooth) {
                        const double fs[5] = {S.f[a], S.f[g], S.f[c], fh, pw};
                        acc.addProduct(fs, 5);
                    } else {
                        const double fs[4] = {S.f[a], S.f[g], S.f[c], fh};
                        acc.addProduct(fs, 4);
                    }
                }
            }
        }
    });
    ExactSum total;
    for (const auto& p : parts) total.merge(p);
    const double cw = lat.cellWeight();
    return total.value() * (cw * cw * cw);
}

double quadFormA2RefinedSum(const SpectralField& f, QuadWeight weight, const QuadFormOptions& opt) {
    weight.restriction = QuadWeight::Restriction::A2refined;
    double s = 0.0;
    for (int a : {-1, 1})
        for (int b : {-1, 1})
            for (int c : {-1, 1}) {
                weight.octant = {a, b, c};
                s += quadForm(f, weight, opt);
            }
    return s;
}

double quadFormKDecomposition(const SpectralField& f, const QuadFormOptions& opt) {
    const auto S = supportOf(f);
    const auto& lat = f.lattice;
    const DispersionSymbol H{opt.symbol};
    std::map<std::tuple<int, int, long long>, double> slice;
    for (std::size_t a = 0; a < S.f.size(); ++a)
        for (std::size_t g = 0; g < S.f.size(); ++g) {
            const double v1 = (S.k1[a] - S.k1[g]) / (2.0 * lat.L), v2 = (S.k2[a] - S.k2[g]) / (2.0 * lat.lambda);
            const double hv = H.eval(v1, v2);
            const auto key1 = S.k1[a] + S.k1[g], key2 = S.k2[a] + S.k2[g];
            for (long long k = (long long)std::ceil(hv - 1.0); k <= (long long)std::floor(hv + 1.0); ++k)
                slice[{key1, key2, k}] += S.f[a] * S.f[g] * lat.cellWeight();
        }
    double total = 0.0;
    for (const auto& [key, val] : slice) total += val * val * lat.cellWeight();
    return total;
}

QuadFormBound quadFormBound(const SpectralField& f, const QuadWeight& weight, double C, const QuadFormOptions& opt) {
    QuadFormBound b;
    b.value = quadForm(f, weight, opt);
    const double n2 = l2NormSquared(f);
    b.bound = C * n2 * n2;
    b.ratio = b.bound > 0.0 ? b.value / b.bound : 0.0;
    return b;
}

std::string toString(Scenario s) {
    switch (s) {
    case Scenario::RTHyperbolic: return "rt-hyperbolic";
    case Scenario::RTElliptic: return "rt-elliptic";
    case Scenario::RTMixed: return "rt-mixed";
    case Scenario::RTMixedMeanZero: return "rt-mixed-meanzero";
    case Scenario::TTElliptic: return "tt-elliptic";
    case Scenario::TTHyperbolic: return "tt-hyperbolic";
    }
    return "?";
}

Scenario scenarioFromString(const std::string& s) {
    for (auto sc : {Scenario::RTHyperbolic, Scenario::RTElliptic, Scenario::RTMixed, Scenario::RTMixedMeanZero,
                    Scenario::TTElliptic, Scenario::TTHyperbolic})
        if (toString(sc) == s) return sc;
    throw std::invalid_argument("unknown scenario: " + s);
}

SymbolKind symbolOf(Scenario s) {
    switch (s) {
    case Scenario::RTHyperbolic:
    case Scenario::TTHyperbolic: return SymbolKind::Hyperbolic;
    case Scenario::RTElliptic:
    case Scenario::TTElliptic: return SymbolKind::Elliptic;
    default: return SymbolKind::Mixed;
    }
}

Geometry geometryOf(Scenario s) {
    return s == Scenario::TTElliptic || s == Scenario::TTHyperbolic ? Geometry::TT : Geometry::RT;
}

bool meanZeroOf(Scenario s) { return s == Scenario::RTMixedMeanZero; }

GrowthFit fitGrowth(const std::vector<double>& N, const std::vector<double>& R) {
    if (N.size() != R.size() || N.size() < 4) throw std::invalid_argument("fitGrowth: need >= 4 sweep points");
    if (std::all_of(N.begin(), N.end(), [&](double x) { return x == N.front(); }))
        throw std::invalid_argument("fitGrowth: degenerate sweep (constant N)");
    std::vector<double> lx, ly, r4;
    for (std::size_t i = 0; i < N.size(); ++i) {
        if (!(N[i] > 0.0) || !(R[i] > 0.0)) throw std::invalid_argument("fitGrowth: nonpositive entry");
        lx.push_back(std::log(N[i]));
        ly.push_back(std::log(R[i]));
        r4.push_back(std::pow(R[i], 4));
    }
    GrowthFit g;
    const auto p = fitLine(lx, ly);
    const auto l = fitLine(lx, r4);
    g.powerExponent = p.slope;
    g.powerResiduals = p.residuals;
    g.logCoefficient = l.slope;
    g.logResiduals = l.residuals;
    return g;
}

}  // namespace wg
