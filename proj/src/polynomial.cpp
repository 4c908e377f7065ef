#include "wg/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace wg {

Poly2 Poly2::constant(double c) { return monomial(c, 0, 0); }

Poly2 Poly2::monomial(double c, int e1, int e2) {
    if (e1 < 0 || e2 < 0) throw std::invalid_argument("Poly2: negative exponent");
    Poly2 p;
    p.addTerm(c, e1, e2);
    return p;
}

Poly2 Poly2::linear(double a, double b, double c) {
    Poly2 p;
    p.addTerm(a, 1, 0);
    p.addTerm(b, 0, 1);
    p.addTerm(c, 0, 0);
    return p;
}

Poly2& Poly2::addTerm(double c, int e1, int e2) {
    if (c == 0.0) return *this;
    auto [it, fresh] = terms_.try_emplace({e1, e2}, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
    return *this;
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 r = *this;
    for (const auto& [e, c] : o.terms_) r.addTerm(c, e.first, e.second);
    return r;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + o.scaled(-1.0); }

Poly2 Poly2::operator*(const Poly2& o) const {
    Poly2 r;
    for (const auto& [e, c] : terms_)
        for (const auto& [f, d] : o.terms_) r.addTerm(c * d, e.first + f.first, e.second + f.second);
    return r;
}

Poly2 Poly2::scaled(double s) const {
    Poly2 r;
    if (s == 0.0) return r;
    for (const auto& [e, c] : terms_) r.terms_[e] = c * s;
    return r;
}

int Poly2::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
}

double Poly2::eval(double x, double y) const {
    const auto c = restrictY(y);
    return uni::eval(c, x);
}

std::vector<double> Poly2::restrictY(double y) const {
    int deg = 0;
    for (const auto& [e, c] : terms_) deg = std::max(deg, e.first);
    std::vector<double> out(std::size_t(deg) + 1, 0.0);
    for (const auto& [e, c] : terms_) {
        double t = c;
        for (int k = 0; k < e.second; ++k) t *= y;
        out[std::size_t(e.first)] += t;
    }
    return out;
}

Poly2 Poly2::dilatedX(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("dilatedX: t must be positive");
    Poly2 r;
    for (const auto& [e, c] : terms_) r.addTerm(c * std::pow(t, -e.first), e.first, e.second);
    return r;
}

Poly2 square(const Poly2& p) { return p * p; }

namespace uni {

double eval(const std::vector<double>& p, double x) {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<double> derivative(const std::vector<double>& p) {
    if (p.size() <= 1) return {};
    std::vector<double> d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = double(k) * p[k];
    return d;
}

void trim(std::vector<double>& p) {
    while (!p.empty() && p.back() == 0.0) p.pop_back();
}

namespace {

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

double bisect(const std::vector<double>& p, double l, double r, int sl, RootBudget& budget, double tol) {
    for (;;) {
        const double m = 0.5 * (l + r);
        if (m <= l || m >= r || r - l <= tol * std::max({1.0, std::abs(l), std::abs(r)})) return m;
        budget.spend();
        const int sm = sgn(eval(p, m));
        if (sm == 0) return m;
        if (sm == sl)
            l = m;
        else
            r = m;
    }
}

void collect(std::vector<double> p, double a, double b, RootBudget& budget, double tol, std::vector<double>& out) {
    trim(p);
    const int deg = int(p.size()) - 1;
    if (deg <= 0) return;
    if (deg == 1) {
        const double r = -p[0] / p[1];
        if (r >= a && r <= b) out.push_back(r);
        return;
    }
    std::vector<double> pts{a};
    std::vector<double> crit;
    collect(derivative(p), a, b, budget, tol, crit);
    // bracket subdivision at 4 deg intervals, merged with the monotone pieces
    for (int k = 1; k < 4 * deg; ++k) pts.push_back(a + (b - a) * k / (4.0 * deg));
    pts.insert(pts.end(), crit.begin(), crit.end());
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double l = pts[i], r = pts[i + 1];
        const int sl = sgn(eval(p, l)), sr = sgn(eval(p, r));
        if (sl == 0) out.push_back(l);
        if (sl != 0 && sr != 0 && sl != sr) out.push_back(bisect(p, l, r, sl, budget, tol));
    }
    if (sgn(eval(p, b)) == 0) out.push_back(b);
}

}  // namespace

std::vector<double> realRoots(const std::vector<double>& p, double a, double b, RootBudget& budget, double tol) {
    if (!(a <= b)) throw std::invalid_argument("realRoots: empty bracket");
    std::vector<double> out;
    collect(p, a, b, budget, tol, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace uni

}  // namespace wg
