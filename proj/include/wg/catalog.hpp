#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wg/measure.hpp"

namespace wg {

struct Vec2 {
    double x = 0, y = 0;
};

struct SectionParams {
    double theta = 1.0;   // |H(v) - H(w)| <= theta
    double theta2 = 2.0;  // used by the refined section
    double cA = 100.0;    // |H(v,w)|^2 vs cA |H(v) H(w)|
};

using Octant = std::array<int, 3>;
std::vector<Octant> allOctants();

// {|H(w) - C0| <= theta, |w| <= N}
SemiAlgebraicSet hyperbolicAnnulus(double C0, double N, double theta = 1.0);
// {|w1 w2 - C0| <= theta, |w| <= N}
SemiAlgebraicSet saddleAnnulus(double C0, double N, double theta = 1.0);
// set in w for fixed v with H(v) != 0
SemiAlgebraicSet a1Section(Vec2 v, const SectionParams& p = {});
// sets in u for fixed v with H(v) != 0
SemiAlgebraicSet a2PlainSection(Vec2 v, const SectionParams& p = {});
SemiAlgebraicSet a2RefinedSection(Vec2 v, Octant j, const SectionParams& p = {});
// {|H(eta) + H(a+b-eta) - H(a) - H(b)| <= thetaRes, N2/k <= |eta| <= k N2}; N2 <= 0 means |b|
SemiAlgebraicSet eabSet(Vec2 a, Vec2 b, double thetaRes = 1.0, double N2 = 0.0, double comparability = 2.0);

struct ChangeOfVarsRegion {
    enum class Kind { Est11, Est21 };
    Kind kind = Kind::Est11;
    double c = 1.0, d = 1.0;  // c = v1 + v2, d = v1 - v2
    double similar = 3.0;     // |a| ~ |b|: |a| <= similar |b| and |b| <= similar |a|
    double dominant = 100.0;  // X >> Y: |X| > dominant |Y|
    double rho = 1.0;         // implicit constant in |a + b| <~ 1/|cd|
    SemiAlgebraicSet build() const;
};

// simple shapes, used for the lemma corpus and tests
SemiAlgebraicSet disk(double cx, double cy, double r);
SemiAlgebraicSet rectangle(double x0, double x1, double y0, double y1);
SemiAlgebraicSet ellipse(double cx, double cy, double a, double b, double angle);
SemiAlgebraicSet annulus(double cx, double cy, double r0, double r1);
std::vector<SemiAlgebraicSet> lemmaCorpus(std::uint64_t seed, int count = 50);

// "<id>:p1,p2,..." e.g. "hyperbolic-annulus:25,64", "a2-refined:5,3,1,1,1", "est11:10,1"
SemiAlgebraicSet catalogSet(const std::string& spec);
std::vector<std::string> catalogIds();

enum class PropKind { A1, A2plain, A2refined };
std::string toString(PropKind k);
PropKind propKindFromString(const std::string& s);

struct PropSample {
    Vec2 v;
    Octant octant{1, 1, 1};
    double rz = 0.0;
    double maxSlice = 0.0;
};

struct PropCheckResult {
    PropKind kind = PropKind::A1;
    double lambda = 1.0;
    std::vector<PropSample> samples;
    double sup = 0.0;
    Vec2 argmax;
    Octant argOctant{1, 1, 1};
    double maxSlice = 0.0;
    int rejected = 0;  // samples with H(v) = 0
};

// |v| log-spaced over [1, 1e3], v2 on Z/lambda, H(v) != 0
std::vector<Vec2> standardVSamples(double lambda, int magnitudes = 13, int angles = 16);
// A2refined runs every octant; samples with H(v) = 0 are rejected
PropCheckResult propCheck(PropKind kind, const std::vector<Vec2>& vs, double lambda, const SectionParams& p = {},
                          const MeasureOptions& opt = {});

double saddleMaxSlice(double C0, double N, double lambda, const MeasureOptions& opt = {});

}  // namespace wg
