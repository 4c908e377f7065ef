#include "wg/measure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "wg/numeric.hpp"

namespace wg {

std::string toString(Relation r) {
    switch (r) {
    case Relation::Eq: return "=0";
    case Relation::Gt: return ">0";
    case Relation::Ge: return ">=0";
    }
    return "?";
}

Relation relationFromString(const std::string& s) {
    if (s == "=0" || s == "eq0") return Relation::Eq;
    if (s == ">0" || s == "gt0") return Relation::Gt;
    if (s == ">=0" || s == "ge0") return Relation::Ge;
    throw std::invalid_argument("unknown relation token: " + s);
}

Box Box::scaled(double s) const {
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    const double hx = 0.5 * (x1 - x0) * s, hy = 0.5 * (y1 - y0) * s;
    return {cx - hx, cx + hx, cy - hy, cy + hy};
}

namespace {

bool holds(Relation r, double v) {
    switch (r) {
    case Relation::Eq: return v == 0.0;
    case Relation::Gt: return v > 0.0;
    case Relation::Ge: return v >= 0.0;
    }
    return false;
}

}  // namespace

bool SemiAlgebraicSet::contains(double x, double y) const {
    if (!box.contains(x, y)) return false;
    for (const auto& clause : clauses) {
        bool all = true;
        for (const auto& c : clause)
            if (!holds(c.rel, c.poly.eval(x, y))) {
                all = false;
                break;
            }
        if (all) return true;
    }
    return false;
}

std::vector<Poly2> SemiAlgebraicSet::distinctPolynomials() const {
    std::vector<Poly2> out;
    for (const auto& clause : clauses)
        for (const auto& c : clause)
            if (std::find(out.begin(), out.end(), c.poly) == out.end()) out.push_back(c.poly);
    return out;
}

int SemiAlgebraicSet::complexity() const {
    const auto ps = distinctPolynomials();
    int d = 0;
    for (const auto& p : ps) d = std::max(d, p.degree());
    return int(ps.size()) * d;
}

SemiAlgebraicSet SemiAlgebraicSet::withBox(const Box& b) const {
    auto s = *this;
    s.box = b;
    return s;
}

SemiAlgebraicSet SemiAlgebraicSet::dilatedX(double t) const {
    auto s = *this;
    for (auto& clause : s.clauses)
        for (auto& c : clause) c.poly = c.poly.dilatedX(t);
    s.box.x0 *= t;
    s.box.x1 *= t;
    return s;
}

void validate(const SemiAlgebraicSet& set, const MeasureOptions& opt) {
    const auto& b = set.box;
    if (!(b.x0 <= b.x1) || !(b.y0 <= b.y1) || !std::isfinite(b.x0) || !std::isfinite(b.x1) || !std::isfinite(b.y0) ||
        !std::isfinite(b.y1))
        throw MeasureError("semi-algebraic set needs a finite bounding box");
    if (set.clauses.empty()) throw MeasureError("semi-algebraic set has no clauses");
    const int c = set.complexity();
    if (c > opt.complexityBudget)
        throw MeasureError("complexity " + std::to_string(c) + " exceeds budget " + std::to_string(opt.complexityBudget));
}

namespace {

struct SliceContext {
    std::vector<Poly2> polys;
    // clause -> (poly index, relation)
    std::vector<std::vector<std::pair<std::size_t, Relation>>> clauses;

    explicit SliceContext(const SemiAlgebraicSet& set) : polys(set.distinctPolynomials()) {
        for (const auto& clause : set.clauses) {
            std::vector<std::pair<std::size_t, Relation>> cl;
            for (const auto& c : clause) {
                const auto idx = std::size_t(std::find(polys.begin(), polys.end(), c.poly) - polys.begin());
                cl.emplace_back(idx, c.rel);
            }
            clauses.push_back(std::move(cl));
        }
    }
};

double sliceWith(const SliceContext& ctx, const Box& box, double y, const MeasureOptions& opt) {
    if (y < box.y0 || y > box.y1) return 0.0;
    std::vector<std::vector<double>> restricted;
    restricted.reserve(ctx.polys.size());
    std::vector<double> pts{box.x0, box.x1};
    uni::RootBudget budget{opt.rootBudget};
    for (const auto& p : ctx.polys) {
        auto c = p.restrictY(y);
        uni::trim(c);
        const auto r = uni::realRoots(c, box.x0, box.x1, budget, opt.rootTol);
        pts.insert(pts.end(), r.begin(), r.end());
        restricted.push_back(std::move(c));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<double> vals(ctx.polys.size());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double l = pts[i], r = pts[i + 1];
        const double m = 0.5 * (l + r);
        for (std::size_t k = 0; k < restricted.size(); ++k) vals[k] = uni::eval(restricted[k], m);
        for (const auto& cl : ctx.clauses) {
            bool all = true;
            for (const auto& [k, rel] : cl)
                if (!holds(rel, vals[k])) {
                    all = false;
                    break;
                }
            if (all) {
                total += r - l;
                break;
            }
        }
    }
    return total;
}

std::vector<double> latticeRows(const Box& box, double lambda) {
    if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be >= 1");
    std::vector<double> ys;
    const long k0 = long(std::ceil(box.y0 * lambda)), k1 = long(std::floor(box.y1 * lambda));
    for (long k = k0; k <= k1; ++k) ys.push_back(double(k) / lambda);
    return ys;
}

std::vector<double> slicesAt(const SemiAlgebraicSet& set, const std::vector<double>& ys, const MeasureOptions& opt) {
    const SliceContext ctx(set);
    std::vector<double> out(ys.size());
    parallelFor(ys.size(), opt.threads, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t i = b; i < e; ++i) out[i] = sliceWith(ctx, set.box, ys[i], opt);
    });
    return out;
}

}  // namespace

double sliceLength(const SemiAlgebraicSet& set, double y, const MeasureOptions& opt) {
    validate(set, opt);
    return sliceWith(SliceContext(set), set.box, y, opt);
}

double rzMeasure(const SemiAlgebraicSet& set, double lambda, const MeasureOptions& opt) {
    validate(set, opt);
    const auto ys = latticeRows(set.box, lambda);
    double s = 0.0;
    for (double v : slicesAt(set, ys, opt)) s += v;
    return s / lambda;
}

int countMonotonicityChanges(const std::vector<double>& values, double tol) {
    int changes = 0, dir = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        if (std::abs(d) <= tol) continue;
        const int s = d > 0 ? 1 : -1;
        if (dir != 0 && s != dir) ++changes;
        dir = s;
    }
    return changes;
}

SliceProfile sliceProfile(const SemiAlgebraicSet& set, double lambda, const MeasureOptions& opt) {
    validate(set, opt);
    SliceProfile p;
    p.y = latticeRows(set.box, lambda);
    p.length = slicesAt(set, p.y, opt);
    for (std::size_t i = 0; i < p.y.size(); ++i)
        if (p.length[i] > p.maxSlice) {
            p.maxSlice = p.length[i];
            p.argmax = p.y[i];
        }
    p.monotonicityChanges = countMonotonicityChanges(p.length);
    return p;
}

namespace {

struct Simpson {
    const SliceContext& ctx;
    const Box& box;
    const MeasureOptions& opt;
    double errorSum = 0.0;
    bool converged = true;

    double f(double y) const { return sliceWith(ctx, box, y, opt); }

    double refine(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double diff = left + right - whole;
        if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
        if (depth >= opt.areaMaxDepth) {
            converged = false;
            errorSum += std::abs(diff) / 15.0;
            return left + right + diff / 15.0;
        }
        return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) + refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

AreaResult euclidMeasure(const SemiAlgebraicSet& set, const MeasureOptions& opt) {
    validate(set, opt);
    const SliceContext ctx(set);
    const Box& box = set.box;
    const int n = std::max(opt.areaPanels, 1);
    const double h = (box.y1 - box.y0) / n;
    if (!(h > 0.0)) return {};
    std::vector<double> ys(std::size_t(2 * n + 1));
    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = box.y0 + 0.5 * h * double(i);
    ys.back() = box.y1;
    const auto fs = slicesAt(set, ys, opt);
    double coarse = 0.0;
    for (int p = 0; p < n; ++p) coarse += h / 6.0 * (fs[2 * p] + 4.0 * fs[2 * p + 1] + fs[2 * p + 2]);
    const double tol = std::max(opt.areaRelTol * std::abs(coarse), opt.areaAbsTol);

    std::vector<double> part(static_cast<std::size_t>(n));
    std::vector<double> err(static_cast<std::size_t>(n));
    std::vector<char> ok(static_cast<std::size_t>(n), 1);
    parallelFor(std::size_t(n), opt.threads, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t p = b; p < e; ++p) {
            Simpson s{ctx, box, opt};
            const double a = ys[2 * p], c = ys[2 * p + 2];
            const double whole = (c - a) / 6.0 * (fs[2 * p] + 4.0 * fs[2 * p + 1] + fs[2 * p + 2]);
            part[p] = s.refine(a, c, fs[2 * p], fs[2 * p + 1], fs[2 * p + 2], whole, tol / n, 0);
            err[p] = s.errorSum;
            ok[p] = s.converged;
        }
    });
    AreaResult r;
    for (std::size_t p = 0; p < part.size(); ++p) {
        r.value += part[p];
        r.errorEstimate += err[p];
        r.converged = r.converged && ok[p];
    }
    r.value = std::max(r.value, 0.0);
    if (r.converged) r.errorEstimate = tol;
    return r;
}

LemmaRecord lemmaCheck(const SemiAlgebraicSet& set, double lambda, const MeasureOptions& opt) {
    LemmaRecord rec;
    const auto prof = sliceProfile(set, lambda, opt);
    double s = 0.0;
    for (double v : prof.length) s += v;
    rec.lhs = s / lambda;
    rec.maxSlice = prof.maxSlice;
    rec.monotonicityChanges = prof.monotonicityChanges;
    const auto a = euclidMeasure(set, opt);
    rec.area = a.value;
    rec.areaConverged = a.converged;
    const double denom = rec.area + rec.maxSlice / lambda;
    if (denom > 0.0)
        rec.impliedC = rec.lhs / denom;
    else if (rec.lhs > 0.0)
        throw MeasureError("lemmaCheck: positive lhs with zero area and zero max slice");
    return rec;
}

namespace {

double parseNumber(const std::string& tok) {
    const auto slash = tok.find('/');
    auto one = [](const std::string& s) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad number: " + s);
        return v;
    };
    if (slash == std::string::npos) return one(tok);
    const double q = one(tok.substr(slash + 1));
    if (q == 0.0) throw std::invalid_argument("zero denominator: " + tok);
    return one(tok.substr(0, slash)) / q;
}

int parseExponent(const std::string& tok) {
    int v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size() || v < 0) throw std::invalid_argument("bad exponent: " + tok);
    return v;
}

}  // namespace

SemiAlgebraicSet parseClauses(const std::string& text) {
    SemiAlgebraicSet set;
    bool haveBox = false;
    std::vector<Conjunct> current;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    try {
        while (std::getline(in, line)) {
            ++lineNo;
            if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
            std::istringstream ls(line);
            std::vector<std::string> tok;
            for (std::string t; ls >> t;) tok.push_back(t);
            if (tok.empty()) continue;
            if (tok[0] == "box") {
                if (tok.size() != 5) throw std::invalid_argument("box needs 4 numbers");
                set.box = {parseNumber(tok[1]), parseNumber(tok[2]), parseNumber(tok[3]), parseNumber(tok[4])};
                haveBox = true;
            } else if (tok[0] == "or") {
                if (current.empty()) throw std::invalid_argument("empty conjunction before 'or'");
                set.clauses.push_back(std::move(current));
                current.clear();
            } else if (tok[0] == "label") {
                set.label = line.substr(line.find("label") + 5);
                set.label.erase(0, set.label.find_first_not_of(' '));
            } else {
                Conjunct c;
                c.rel = relationFromString(tok[0]);
                if ((tok.size() - 1) % 3 != 0 || tok.size() == 1)
                    throw std::invalid_argument("monomials come in triples 'coeff e1 e2'");
                for (std::size_t i = 1; i < tok.size(); i += 3)
                    c.poly.addTerm(parseNumber(tok[i]), parseExponent(tok[i + 1]), parseExponent(tok[i + 2]));
                current.push_back(std::move(c));
            }
        }
    } catch (const std::exception& e) {
        throw std::invalid_argument("clause text line " + std::to_string(lineNo) + ": " + e.what());
    }
    if (!current.empty()) set.clauses.push_back(std::move(current));
    if (!haveBox) throw std::invalid_argument("clause text: missing box line");
    if (set.clauses.empty()) throw std::invalid_argument("clause text: no clauses");
    return set;
}

SemiAlgebraicSet loadClauseFile(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open clause file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parseClauses(ss.str());
}

std::string formatClauses(const SemiAlgebraicSet& set) {
    std::ostringstream out;
    out << std::setprecision(17);
    if (!set.label.empty()) out << "label " << set.label << '\n';
    out << "box " << set.box.x0 << ' ' << set.box.x1 << ' ' << set.box.y0 << ' ' << set.box.y1 << '\n';
    for (std::size_t i = 0; i < set.clauses.size(); ++i) {
        if (i) out << "or\n";
        for (const auto& c : set.clauses[i]) {
            out << toString(c.rel);
            if (c.poly.isZero()) out << " 0 0 0";
            for (const auto& [e, v] : c.poly.terms()) out << ' ' << v << ' ' << e.first << ' ' << e.second;
            out << '\n';
        }
    }
    return out.str();
}

}  // namespace wg
