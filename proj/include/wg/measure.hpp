#pragma once

#include <array>
#include <string>
#include <vector>

#include "wg/polynomial.hpp"

namespace wg {

enum class Relation { Eq, Gt, Ge };  // p = 0, p > 0, p >= 0

std::string toString(Relation r);
Relation relationFromString(const std::string& s);

struct Conjunct {
    Poly2 poly;
    Relation rel = Relation::Ge;
};

struct Box {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
    // same centre, each side multiplied by s
    Box scaled(double s) const;
};

struct SemiAlgebraicSet {
    std::vector<std::vector<Conjunct>> clauses;  // union of conjunctions
    Box box;
    std::string label;

    bool contains(double x, double y) const;
    // distinct polynomials times max degree
    int complexity() const;
    std::vector<Poly2> distinctPolynomials() const;
    SemiAlgebraicSet withBox(const Box& b) const;
    // image under (x, y) -> (t x, y)
    SemiAlgebraicSet dilatedX(double t) const;
};

struct MeasureOptions {
    int complexityBudget = 64;
    double rootTol = 1e-12;
    long rootBudget = 200000;  // bisection steps per slice
    double areaRelTol = 1e-6;
    double areaAbsTol = 1e-9;
    int areaPanels = 128;
    int areaMaxDepth = 40;
    int threads = 1;
};

// throws MeasureError on an empty box or complexity over budget
void validate(const SemiAlgebraicSet& set, const MeasureOptions& opt = {});

double sliceLength(const SemiAlgebraicSet& set, double y, const MeasureOptions& opt = {});

// (1/lambda) sum over y in Z/lambda inside the box
double rzMeasure(const SemiAlgebraicSet& set, double lambda, const MeasureOptions& opt = {});

struct AreaResult {
    double value = 0.0;
    double errorEstimate = 0.0;
    bool converged = true;
};
AreaResult euclidMeasure(const SemiAlgebraicSet& set, const MeasureOptions& opt = {});

struct SliceProfile {
    std::vector<double> y, length;
    double maxSlice = 0.0;
    double argmax = 0.0;
    int monotonicityChanges = 0;
};
SliceProfile sliceProfile(const SemiAlgebraicSet& set, double lambda, const MeasureOptions& opt = {});
int countMonotonicityChanges(const std::vector<double>& values, double tol = 1e-9);

struct LemmaRecord {
    double lhs = 0, area = 0, maxSlice = 0, impliedC = 0;
    int monotonicityChanges = 0;
    bool areaConverged = true;
};
LemmaRecord lemmaCheck(const SemiAlgebraicSet& set, double lambda, const MeasureOptions& opt = {});

// clause text format:
//   box x0 x1 y0 y1
//   <rel> coeff e1 e2 [coeff e1 e2 ...]     with rel one of >=0 >0 =0
//   or                                       starts the next conjunction
// coefficients may be written p/q
SemiAlgebraicSet parseClauses(const std::string& text);
SemiAlgebraicSet loadClauseFile(const std::string& path);
std::string formatClauses(const SemiAlgebraicSet& set);

}  // namespace wg
