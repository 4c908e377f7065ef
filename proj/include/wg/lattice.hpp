#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace wg {

using cplx = std::complex<double>;

enum class Geometry { RT, TT };

std::string toString(Geometry g);
Geometry geometryFromString(const std::string& s);

// x1-frequencies k1/L, x2-frequencies k2/lambda, both truncated at |.| <= N.
// Points are enumerated with k2 major and k1 minor, both ascending.
struct FrequencyLattice {
    double lambda = 1.0;
    double L = 8.0;
    double N = 1.0;
    Geometry geometry = Geometry::RT;
    int n1 = 0;  // floor(N*L)
    int n2 = 0;  // floor(N*lambda)

    int width1() const { return 2 * n1 + 1; }
    int width2() const { return 2 * n2 + 1; }
    std::size_t size() const { return std::size_t(width1()) * std::size_t(width2()); }

    bool contains(int k1, int k2) const { return k1 >= -n1 && k1 <= n1 && k2 >= -n2 && k2 <= n2; }
    std::size_t index(int k1, int k2) const {
        return std::size_t(k2 + n2) * std::size_t(width1()) + std::size_t(k1 + n1);
    }
    int k1Of(std::size_t i) const { return int(i % std::size_t(width1())) - n1; }
    int k2Of(std::size_t i) const { return int(i / std::size_t(width1())) - n2; }

    double xi1(int k1) const { return double(k1) / L; }
    double xi2(int k2) const { return double(k2) / lambda; }

    // measure carried by one lattice point, 1/(L*lambda)
    double cellWeight() const { return 1.0 / (L * lambda); }
    double volume() const { return L * lambda; }

    bool operator==(const FrequencyLattice& o) const {
        return lambda == o.lambda && L == o.L && N == o.N && geometry == o.geometry;
    }
};

FrequencyLattice buildLattice(double lambda, double L, double N, Geometry geometry);

struct SpectralField {
    FrequencyLattice lattice;
    std::vector<cplx> coeffs;

    static SpectralField zeros(const FrequencyLattice& lat);
    static SpectralField singleMode(const FrequencyLattice& lat, int k1, int k2, cplx value = 1.0);

    cplx& at(int k1, int k2) { return coeffs[lattice.index(k1, k2)]; }
    cplx at(int k1, int k2) const { return coeffs[lattice.index(k1, k2)]; }

    SpectralField modulus() const;
    SpectralField scaled(cplx s) const;
    bool isZero() const;
    bool isFinite() const;
};

enum class SymbolKind { Elliptic, Hyperbolic, Mixed };

std::string toString(SymbolKind k);
SymbolKind symbolFromString(const std::string& s);

struct DispersionSymbol {
    SymbolKind kind = SymbolKind::Hyperbolic;

    double eval(double x1, double x2) const {
        switch (kind) {
        case SymbolKind::Elliptic: return x1 * x1 + x2 * x2;
        case SymbolKind::Hyperbolic: return x1 * x1 - x2 * x2;
        case SymbolKind::Mixed: return x1 * x2;
        }
        return 0.0;
    }
    // symmetric bilinear form with eval(a+b) - eval(a-b) = 4 * evalBilinear(a, b)
    double evalBilinear(double a1, double a2, double b1, double b2) const {
        switch (kind) {
        case SymbolKind::Elliptic: return a1 * b1 + a2 * b2;
        case SymbolKind::Hyperbolic: return a1 * b1 - a2 * b2;
        case SymbolKind::Mixed: return 0.5 * (a1 * b2 + a2 * b1);
        }
        return 0.0;
    }
    long long evalInt(long long k1, long long k2) const {
        switch (kind) {
        case SymbolKind::Elliptic: return k1 * k1 + k2 * k2;
        case SymbolKind::Hyperbolic: return k1 * k1 - k2 * k2;
        case SymbolKind::Mixed: return k1 * k2;
        }
        return 0;
    }
    double maxAbsOn(double N) const { return kind == SymbolKind::Elliptic ? 2.0 * N * N : N * N; }
};

enum class BumpKind { Sharp, Smooth };

// Time quadrature: composite trapezoid on `samples` uniform nodes over [t0,t1],
// multiplied by the smooth bump when bumpKind == Smooth.
struct TimeWindow {
    double t0 = 0.0;
    double t1 = 1.0;
    int samples = 2;
    BumpKind bumpKind = BumpKind::Sharp;

    static TimeWindow sharp(double t0, double t1, int samples);
    // bump centred at 0, tabulated on [-halfWidth, halfWidth]
    static TimeWindow smooth(double halfWidth, int samples);

    double dt() const { return (t1 - t0) / double(samples - 1); }
    double time(int j) const { return j + 1 == samples ? t1 : t0 + j * dt(); }
    std::vector<double> weights() const;
    double length() const { return t1 - t0; }
};

// fewest admissible samples: 8 per fastest period of e(-tH), rate 2N^2
int minTimeSamples(double N, double t0, double t1);

// w(t) = C sinc(t/8)^8, C chosen so that min over [-2,2] equals 1.
// Its transform is supported in [-1/2,1/2] and is nonnegative.
double smoothBump(double t);
double smoothBumpHat(double tau);

struct Projection {
    enum class Mode { LE, AT, MeanZeroX2 } mode = Mode::LE;
    double N = 1.0;

    static Projection le(double N) { return {Mode::LE, N}; }
    static Projection at(double N) { return {Mode::AT, N}; }
    static Projection meanZeroX2() { return {Mode::MeanZeroX2, 0.0}; }
};

bool keeps(const FrequencyLattice& lat, const Projection& p, int k1, int k2);
SpectralField project(const SpectralField& field, const Projection& p);

double l2Norm(const SpectralField& field);
double l2NormSquared(const SpectralField& field);
SpectralField normalized(const SpectralField& field);

}  // namespace wg
