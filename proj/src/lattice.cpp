#include "wg/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wg {

namespace {

constexpr double kSlack = 1e-9;

int floorProduct(double a, double b) { return int(std::floor(a * b + kSlack)); }

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - std::numbers::pi * std::numbers::pi * x * x / 6.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

// centred cardinal B-spline of order 8, unit knots, support [-4,4]
double bspline8(double x) {
    static constexpr double binom[9] = {1, 8, 28, 56, 70, 56, 28, 8, 1};
    if (x <= -4.0 || x >= 4.0) return 0.0;
    double s = 0.0;
    for (int j = 0; j <= 8; ++j) {
        const double y = x + 4.0 - j;
        if (y > 0.0) s += ((j & 1) ? -1.0 : 1.0) * binom[j] * std::pow(y, 7);
    }
    return std::max(0.0, s / 5040.0);
}

const double kBumpScale = 1.0 / std::pow(sinc(0.25), 8);

}  // namespace

std::string toString(Geometry g) { return g == Geometry::RT ? "RT" : "TT"; }

Geometry geometryFromString(const std::string& s) {
    if (s == "RT" || s == "rt") return Geometry::RT;
    if (s == "TT" || s == "tt") return Geometry::TT;
    throw std::invalid_argument("unknown geometry: " + s);
}

std::string toString(SymbolKind k) {
    switch (k) {
    case SymbolKind::Elliptic: return "elliptic";
    case SymbolKind::Hyperbolic: return "hyperbolic";
    case SymbolKind::Mixed: return "mixed";
    }
    return "?";
}

SymbolKind symbolFromString(const std::string& s) {
    if (s == "elliptic") return SymbolKind::Elliptic;
    if (s == "hyperbolic") return SymbolKind::Hyperbolic;
    if (s == "mixed") return SymbolKind::Mixed;
    throw std::invalid_argument("unknown symbol: " + s);
}

FrequencyLattice buildLattice(double lambda, double L, double N, Geometry geometry) {
    if (!std::isfinite(lambda) || !std::isfinite(L) || !std::isfinite(N))
        throw std::invalid_argument("lattice parameters must be finite");
    if (lambda < 1.0) throw std::invalid_argument("lattice: lambda < 1");
    if (L < 8.0 * std::max(lambda, 1.0)) throw std::invalid_argument("lattice: L < 8*max(lambda,1)");
    if (N < 1.0) throw std::invalid_argument("lattice: N < 1");
    FrequencyLattice lat;
    lat.lambda = lambda;
    lat.L = L;
    lat.N = N;
    lat.geometry = geometry;
    lat.n1 = floorProduct(N, L);
    lat.n2 = floorProduct(N, lambda);
    return lat;
}

SpectralField SpectralField::zeros(const FrequencyLattice& lat) {
    return SpectralField{lat, std::vector<cplx>(lat.size(), cplx(0.0, 0.0))};
}

SpectralField SpectralField::singleMode(const FrequencyLattice& lat, int k1, int k2, cplx value) {
    if (!lat.contains(k1, k2)) throw std::out_of_range("mode outside lattice");
    auto f = zeros(lat);
    f.at(k1, k2) = value;
    return f;
}

SpectralField SpectralField::modulus() const {
    SpectralField out = *this;
    for (auto& c : out.coeffs) c = std::abs(c);
    return out;
}

SpectralField SpectralField::scaled(cplx s) const {
    SpectralField out = *this;
    for (auto& c : out.coeffs) c *= s;
    return out;
}

bool SpectralField::isZero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](cplx c) { return c == cplx(0.0, 0.0); });
}

bool SpectralField::isFinite() const {
    return std::all_of(coeffs.begin(), coeffs.end(),
                       [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

TimeWindow TimeWindow::sharp(double t0, double t1, int samples) {
    if (!(t1 > t0) || samples < 2) throw std::invalid_argument("time window: need t1 > t0 and >= 2 samples");
    return TimeWindow{t0, t1, samples, BumpKind::Sharp};
}

TimeWindow TimeWindow::smooth(double halfWidth, int samples) {
    if (!(halfWidth > 0.0) || samples < 2) throw std::invalid_argument("time window: bad smooth window");
    return TimeWindow{-halfWidth, halfWidth, samples, BumpKind::Smooth};
}

std::vector<double> TimeWindow::weights() const {
    std::vector<double> w(std::size_t(samples), dt());
    w.front() *= 0.5;
    w.back() *= 0.5;
    if (bumpKind == BumpKind::Smooth)
        for (int j = 0; j < samples; ++j) w[std::size_t(j)] *= smoothBump(time(j));
    return w;
}

int minTimeSamples(double N, double t0, double t1) {
    return 8 * int(std::ceil(2.0 * N * N * (t1 - t0) - kSlack));
}

double smoothBump(double t) { return kBumpScale * std::pow(sinc(t / 8.0), 8); }

double smoothBumpHat(double tau) { return 8.0 * kBumpScale * bspline8(8.0 * tau); }

bool keeps(const FrequencyLattice& lat, const Projection& p, int k1, int k2) {
    const double a1 = std::abs(double(k1)), a2 = std::abs(double(k2));
    switch (p.mode) {
    case Projection::Mode::LE:
        return a1 <= p.N * lat.L + kSlack && a2 <= p.N * lat.lambda + kSlack;
    case Projection::Mode::AT: {
        const bool inside = a1 <= p.N * lat.L + kSlack && a2 <= p.N * lat.lambda + kSlack;
        if (!inside) return false;
        if (p.N <= 1.0) return true;
        return a1 > 0.5 * p.N * lat.L + kSlack || a2 > 0.5 * p.N * lat.lambda + kSlack;
    }
    case Projection::Mode::MeanZeroX2:
        return k2 != 0;
    }
    return false;
}

SpectralField project(const SpectralField& field, const Projection& p) {
    if (p.mode != Projection::Mode::MeanZeroX2 && p.N > field.lattice.N + kSlack)
        throw std::invalid_argument("projection cutoff exceeds lattice cutoff");
    SpectralField out = field;
    const auto& lat = field.lattice;
    for (std::size_t i = 0; i < lat.size(); ++i)
        if (!keeps(lat, p, lat.k1Of(i), lat.k2Of(i))) out.coeffs[i] = 0.0;
    return out;
}

double l2NormSquared(const SpectralField& field) {
    double s = 0.0;
    for (const auto& c : field.coeffs) s += std::norm(c);
    return s * field.lattice.cellWeight();
}

double l2Norm(const SpectralField& field) { return std::sqrt(l2NormSquared(field)); }

SpectralField normalized(const SpectralField& field) {
    const double n = l2Norm(field);
    if (!(n > 0.0)) throw std::invalid_argument("cannot normalize zero field");
    return field.scaled(1.0 / n);
}

}  // namespace wg
