#include "wg/catalog.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wg/numeric.hpp"

namespace wg {

namespace {

const Poly2 X = Poly2::x(), Y = Poly2::y();

Poly2 hyp(const Poly2& a, const Poly2& b) { return a * a - b * b; }

Conjunct ge(Poly2 p) { return {std::move(p), Relation::Ge}; }
Conjunct gt(Poly2 p) { return {std::move(p), Relation::Gt}; }

Box centred(double cx, double cy, double hx, double hy) {
    // a hair of slack so boundary points stay inside after rounding
    hx = hx * (1.0 + 1e-9) + 1e-12;
    hy = hy * (1.0 + 1e-9) + 1e-12;
    return {cx - hx, cx + hx, cy - hy, cy + hy};
}

// |P| <= t as two conjuncts
void absLe(std::vector<Conjunct>& out, const Poly2& P, double t) {
    out.push_back(ge(Poly2::constant(t) - P));
    out.push_back(ge(Poly2::constant(t) + P));
}

double hOf(Vec2 v) { return v.x * v.x - v.y * v.y; }

void requireNonnull(Vec2 v) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw std::invalid_argument("section: non-finite v");
    if (hOf(v) == 0.0) throw std::invalid_argument("section: H(v) = 0");
}

// parallelogram |alpha|, |beta| <= R with w1 = (c alpha + d beta)/2, w2 = (c alpha - d beta)/2
Box alphaBetaBox(double c, double d, double R) {
    const double h = 0.5 * (std::abs(c) + std::abs(d)) * R;
    return centred(0.0, 0.0, h, h);
}

std::string fmt(double v) {
    std::ostringstream o;
    o << v;
    return o.str();
}

}  // namespace

std::vector<Octant> allOctants() {
    std::vector<Octant> out;
    for (int a : {1, -1})
        for (int b : {1, -1})
            for (int c : {1, -1}) out.push_back({a, b, c});
    return out;
}

SemiAlgebraicSet hyperbolicAnnulus(double C0, double N, double theta) {
    if (!(N > 0.0) || !(theta > 0.0)) throw std::invalid_argument("hyperbolicAnnulus: N and theta must be positive");
    SemiAlgebraicSet s;
    std::vector<Conjunct> c;
    absLe(c, hyp(X, Y) - Poly2::constant(C0), theta);
    c.push_back(ge(Poly2::constant(N * N) - X * X - Y * Y));
    s.clauses.push_back(std::move(c));
    s.box = {-N, N, -N, N};
    s.label = "hyperbolic-annulus C0=" + fmt(C0) + " N=" + fmt(N);
    return s;
}

SemiAlgebraicSet saddleAnnulus(double C0, double N, double theta) {
    if (!(N > 0.0) || !(theta > 0.0)) throw std::invalid_argument("saddleAnnulus: N and theta must be positive");
    SemiAlgebraicSet s;
    std::vector<Conjunct> c;
    absLe(c, X * Y - Poly2::constant(C0), theta);
    c.push_back(ge(Poly2::constant(N * N) - X * X - Y * Y));
    s.clauses.push_back(std::move(c));
    s.box = {-N, N, -N, N};
    s.label = "saddle-annulus C0=" + fmt(C0) + " N=" + fmt(N);
    return s;
}

SemiAlgebraicSet a1Section(Vec2 v, const SectionParams& p) {
    requireNonnull(v);
    if (!(p.cA > 0.0) || !(p.theta > 0.0)) throw std::invalid_argument("a1Section: bad parameters");
    const double hv = hOf(v);
    const Poly2 H = hyp(X, Y);
    const Poly2 B = Poly2::linear(v.x, -v.y, 0.0);  // H(v, w)
    const Poly2 B2 = B * B;
    std::vector<Conjunct> base;
    absLe(base, Poly2::constant(hv) - H, p.theta);
    // |H(v,w)|^2 <= cA |H(v)| |H(w)|, split on the sign of H(w)
    auto pos = base, neg = base;
    pos.push_back(ge(H));
    pos.push_back(ge(H.scaled(p.cA * std::abs(hv)) - B2));
    neg.push_back(ge(-H));
    neg.push_back(ge(H.scaled(-p.cA * std::abs(hv)) - B2));
    SemiAlgebraicSet s;
    s.clauses = {pos, neg};
    const double c = v.x + v.y, d = v.x - v.y;
    const double R = std::sqrt((4.0 * p.cA + 2.0) * (1.0 + p.theta / std::abs(c * d)));
    s.box = alphaBetaBox(c, d, R);
    s.label = "a1 v=(" + fmt(v.x) + "," + fmt(v.y) + ")";
    return s;
}

namespace {

double a2Radius(double c, double d, double theta, double cA) {
    if (!(cA > 1.0)) throw std::invalid_argument("A2 sections need cA > 1");
    const double q = std::sqrt(2.0 * cA - 1.0);
    return (q + 1.0) / (q - 1.0) + theta / (2.0 * std::abs(c * d));
}

std::vector<std::vector<Conjunct>> a2Clauses(Vec2 v, double theta, double cA) {
    const double hv = hOf(v);
    const Poly2 P = hyp(X + Poly2::constant(v.x), Y + Poly2::constant(v.y));  // H(u+v)
    const Poly2 Q = hyp(X - Poly2::constant(v.x), Y - Poly2::constant(v.y));  // H(u-v)
    const Poly2 PQ = P * Q;
    const Poly2 M = hyp(X, Y) - Poly2::constant(hv);  // H(u+v, u-v) = H(u) - H(v)
    const Poly2 M2 = M * M;
    std::vector<Conjunct> base;
    // H(u+v) - H(u-v) = 4 H(u, v)
    absLe(base, Poly2::linear(4.0 * v.x, -4.0 * v.y, 0.0), theta);
    auto pos = base, neg = base;
    pos.push_back(ge(PQ));
    pos.push_back(gt(M2 - PQ.scaled(cA)));
    neg.push_back(gt(-PQ));
    neg.push_back(gt(M2 + PQ.scaled(cA)));
    return {pos, neg};
}

}  // namespace

SemiAlgebraicSet a2PlainSection(Vec2 v, const SectionParams& p) {
    requireNonnull(v);
    SemiAlgebraicSet s;
    s.clauses = a2Clauses(v, p.theta, p.cA);
    const double c = v.x + v.y, d = v.x - v.y;
    s.box = alphaBetaBox(c, d, a2Radius(c, d, p.theta, p.cA));
    s.label = "a2-plain v=(" + fmt(v.x) + "," + fmt(v.y) + ")";
    return s;
}

SemiAlgebraicSet a2RefinedSection(Vec2 v, Octant j, const SectionParams& p) {
    requireNonnull(v);
    for (int s : j)
        if (s != 1 && s != -1) throw std::invalid_argument("octant entries must be +-1");
    SemiAlgebraicSet s;
    s.clauses = a2Clauses(v, p.theta2, p.cA);
    // u + v and u - v in J_j
    for (double sg : {1.0, -1.0}) {
        const Poly2 a = X + Poly2::constant(sg * v.x), b = Y + Poly2::constant(sg * v.y);
        for (auto& cl : s.clauses) {
            cl.push_back(ge(a.scaled(j[0])));
            cl.push_back(ge(b.scaled(j[1])));
            cl.push_back(ge(hyp(a, b).scaled(j[2])));
        }
    }
    const double c = v.x + v.y, d = v.x - v.y;
    s.box = alphaBetaBox(c, d, a2Radius(c, d, p.theta2, p.cA));
    s.label = "a2-refined v=(" + fmt(v.x) + "," + fmt(v.y) + ") j=(" + std::to_string(j[0]) + "," +
              std::to_string(j[1]) + "," + std::to_string(j[2]) + ")";
    return s;
}

SemiAlgebraicSet eabSet(Vec2 a, Vec2 b, double thetaRes, double N2, double comparability) {
    if (N2 <= 0.0) N2 = std::hypot(b.x, b.y);
    if (!(N2 > 0.0)) throw std::invalid_argument("eabSet: N2 must be positive");
    if (!(comparability > 1.0) || !(thetaRes > 0.0)) throw std::invalid_argument("eabSet: bad parameters");
    const Vec2 s{a.x + b.x, a.y + b.y};
    const Poly2 G = hyp(X, Y) + hyp(Poly2::constant(s.x) - X, Poly2::constant(s.y) - Y) -
                    Poly2::constant(hOf(a) + hOf(b));
    std::vector<Conjunct> c;
    absLe(c, G, thetaRes);
    const double hi = comparability * N2, lo = N2 / comparability;
    c.push_back(ge(Poly2::constant(hi * hi) - X * X - Y * Y));
    c.push_back(ge(X * X + Y * Y - Poly2::constant(lo * lo)));
    SemiAlgebraicSet set;
    set.clauses.push_back(std::move(c));
    set.box = {-hi, hi, -hi, hi};
    set.label = "eab a=(" + fmt(a.x) + "," + fmt(a.y) + ") b=(" + fmt(b.x) + "," + fmt(b.y) + ")";
    return set;
}

SemiAlgebraicSet ChangeOfVarsRegion::build() const {
    const double cd = std::abs(c * d);
    if (!(cd > 0.0) || !std::isfinite(cd)) throw std::invalid_argument("change of variables needs cd != 0");
    const double delta = rho / cd;
    SemiAlgebraicSet s;
    std::vector<Conjunct> cl;
    if (kind == Kind::Est11) {
        if (!(similar >= 1.0)) throw std::invalid_argument("similar must be >= 1");
        absLe(cl, X * Y - Poly2::constant(1.0), delta);
        cl.push_back(ge(Y * Y * Poly2::constant(similar * similar) - X * X));
        cl.push_back(ge(X * X * Poly2::constant(similar * similar) - Y * Y));
        const double R = std::sqrt(similar * (1.0 + delta));
        s.box = centred(0.0, 0.0, R, R);
        s.label = "est11 |cd|=" + fmt(cd);
    } else {
        if (!(dominant > 1.0)) throw std::invalid_argument("dominant must be > 1");
        absLe(cl, X + Y, delta);
        const Poly2 A = (X + Poly2::constant(1.0)) * (Y - Poly2::constant(1.0));
        const Poly2 B = (X - Poly2::constant(1.0)) * (Y + Poly2::constant(1.0));
        cl.push_back(gt(A * A - (B * B).scaled(dominant * dominant)));
        const double q = std::sqrt(dominant);
        const double R = (q + 1.0) / (q - 1.0) + delta;
        s.box = centred(0.0, 0.0, R, R);
        s.label = "est21 |cd|=" + fmt(cd);
    }
    s.clauses.push_back(std::move(cl));
    return s;
}

SemiAlgebraicSet disk(double cx, double cy, double r) {
    SemiAlgebraicSet s;
    const Poly2 dx = X - Poly2::constant(cx), dy = Y - Poly2::constant(cy);
    s.clauses.push_back({ge(Poly2::constant(r * r) - dx * dx - dy * dy)});
    s.box = centred(cx, cy, r, r);
    s.label = "disk";
    return s;
}

SemiAlgebraicSet rectangle(double x0, double x1, double y0, double y1) {
    SemiAlgebraicSet s;
    s.clauses.push_back({ge(X - Poly2::constant(x0)), ge(Poly2::constant(x1) - X), ge(Y - Poly2::constant(y0)),
                         ge(Poly2::constant(y1) - Y)});
    s.box = {x0, x1, y0, y1};
    s.label = "rectangle";
    return s;
}

SemiAlgebraicSet ellipse(double cx, double cy, double a, double b, double angle) {
    const double co = std::cos(angle), si = std::sin(angle);
    const Poly2 dx = X - Poly2::constant(cx), dy = Y - Poly2::constant(cy);
    const Poly2 p = dx.scaled(co) + dy.scaled(si), q = dy.scaled(co) - dx.scaled(si);
    SemiAlgebraicSet s;
    s.clauses.push_back({ge(Poly2::constant(1.0) - (p * p).scaled(1.0 / (a * a)) - (q * q).scaled(1.0 / (b * b)))});
    s.box = centred(cx, cy, std::sqrt(a * a * co * co + b * b * si * si), std::sqrt(a * a * si * si + b * b * co * co));
    s.label = "ellipse";
    return s;
}

SemiAlgebraicSet annulus(double cx, double cy, double r0, double r1) {
    const Poly2 dx = X - Poly2::constant(cx), dy = Y - Poly2::constant(cy);
    const Poly2 rr = dx * dx + dy * dy;
    SemiAlgebraicSet s;
    s.clauses.push_back({ge(Poly2::constant(r1 * r1) - rr), ge(rr - Poly2::constant(r0 * r0))});
    s.box = centred(cx, cy, r1, r1);
    s.label = "annulus";
    return s;
}

std::vector<SemiAlgebraicSet> lemmaCorpus(std::uint64_t seed, int count) {
    Philox rng(seed, "lemma-corpus");
    auto logUniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, rng.uniform()); };
    std::vector<SemiAlgebraicSet> out;
    for (int i = 0; i < count; ++i) {
        const double cx = 10.0 * rng.uniform() - 5.0, cy = 10.0 * rng.uniform() - 5.0;
        if (i % 2 == 0) {
            out.push_back(ellipse(cx, cy, logUniform(0.05, 20.0), logUniform(0.05, 20.0), std::numbers::pi * rng.uniform()));
        } else {
            const double r0 = logUniform(0.1, 10.0);
            out.push_back(annulus(cx, cy, r0, r0 + logUniform(0.02, 10.0)));
        }
        out.back().label += " #" + std::to_string(i);
    }
    return out;
}

namespace {

std::vector<double> parseParams(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string t; std::getline(ss, t, ',');) {
        std::size_t used = 0;
        out.push_back(std::stod(t, &used));
        if (used != t.size()) throw std::invalid_argument("bad catalog parameter: " + t);
    }
    return out;
}

}  // namespace

std::vector<std::string> catalogIds() {
    return {"hyperbolic-annulus", "saddle-annulus", "a1", "a2-plain", "a2-refined", "eab", "est11",
            "est21",              "disk",           "rectangle", "ellipse", "annulus"};
}

SemiAlgebraicSet catalogSet(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string id = spec.substr(0, colon);
    const auto p = colon == std::string::npos ? std::vector<double>{} : parseParams(spec.substr(colon + 1));
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (p.size() < lo || p.size() > hi)
            throw std::invalid_argument("catalog entry " + id + " takes " + std::to_string(lo) + ".." +
                                        std::to_string(hi) + " parameters");
    };
    auto opt = [&](std::size_t i, double dflt) { return i < p.size() ? p[i] : dflt; };
    auto octant = [&](std::size_t i) { return Octant{int(p[i]), int(p[i + 1]), int(p[i + 2])}; };
    if (id == "hyperbolic-annulus") return need(2, 3), hyperbolicAnnulus(p[0], p[1], opt(2, 1.0));
    if (id == "saddle-annulus") return need(2, 3), saddleAnnulus(p[0], p[1], opt(2, 1.0));
    if (id == "a1") return need(2, 2), a1Section({p[0], p[1]});
    if (id == "a2-plain") return need(2, 2), a2PlainSection({p[0], p[1]});
    if (id == "a2-refined") return need(5, 5), a2RefinedSection({p[0], p[1]}, octant(2));
    if (id == "eab") return need(4, 6), eabSet({p[0], p[1]}, {p[2], p[3]}, opt(4, 1.0), opt(5, 0.0));
    if (id == "est11" || id == "est21") {
        need(2, 2);
        ChangeOfVarsRegion r;
        r.kind = id == "est11" ? ChangeOfVarsRegion::Kind::Est11 : ChangeOfVarsRegion::Kind::Est21;
        r.c = p[0];
        r.d = p[1];
        return r.build();
    }
    if (id == "disk") return need(3, 3), disk(p[0], p[1], p[2]);
    if (id == "rectangle") return need(4, 4), rectangle(p[0], p[1], p[2], p[3]);
    if (id == "ellipse") return need(5, 5), ellipse(p[0], p[1], p[2], p[3], p[4]);
    if (id == "annulus") return need(4, 4), annulus(p[0], p[1], p[2], p[3]);
    throw std::invalid_argument("unknown catalog id: " + id);
}

std::string toString(PropKind k) {
    switch (k) {
    case PropKind::A1: return "A1";
    case PropKind::A2plain: return "A2plain";
    case PropKind::A2refined: return "A2refined";
    }
    return "?";
}

PropKind propKindFromString(const std::string& s) {
    for (auto k : {PropKind::A1, PropKind::A2plain, PropKind::A2refined})
        if (toString(k) == s) return k;
    throw std::invalid_argument("unknown proposition kind: " + s);
}

std::vector<Vec2> standardVSamples(double lambda, int magnitudes, int angles) {
    if (magnitudes < 2 || angles < 1) throw std::invalid_argument("standardVSamples: too few samples");
    std::vector<Vec2> out;
    for (int i = 0; i < magnitudes; ++i) {
        const double r = std::pow(10.0, 3.0 * i / (magnitudes - 1));
        for (int k = 0; k < angles; ++k) {
            const double phi = 2.0 * std::numbers::pi * (k + 0.3) / angles;
            Vec2 v{r * std::cos(phi), std::round(r * std::sin(phi) * lambda) / lambda};
            if (hOf(v) == 0.0) continue;
            out.push_back(v);
        }
    }
    return out;
}

PropCheckResult propCheck(PropKind kind, const std::vector<Vec2>& vs, double lambda, const SectionParams& p,
                          const MeasureOptions& opt) {
    PropCheckResult res;
    res.kind = kind;
    res.lambda = lambda;
    const auto octs = kind == PropKind::A2refined ? allOctants() : std::vector<Octant>{{1, 1, 1}};
    for (const auto& v : vs) {
        if (hOf(v) == 0.0 || !std::isfinite(v.x) || !std::isfinite(v.y)) {
            ++res.rejected;
            continue;
        }
        for (const auto& j : octs) {
            const auto set = kind == PropKind::A1        ? a1Section(v, p)
                             : kind == PropKind::A2plain ? a2PlainSection(v, p)
                                                         : a2RefinedSection(v, j, p);
            const auto prof = sliceProfile(set, lambda, opt);
            PropSample s;
            s.v = v;
            s.octant = j;
            double sum = 0.0;
            for (double l : prof.length) sum += l;
            s.rz = sum / lambda;
            s.maxSlice = prof.maxSlice;
            if (res.samples.empty() || s.rz > res.sup) {
                res.sup = s.rz;
                res.argmax = v;
                res.argOctant = j;
            }
            res.maxSlice = std::max(res.maxSlice, s.maxSlice);
            res.samples.push_back(s);
        }
    }
    return res;
}

double saddleMaxSlice(double C0, double N, double lambda, const MeasureOptions& opt) {
    return sliceProfile(saddleAnnulus(C0, N), lambda, opt).maxSlice;
}

}  // namespace wg
