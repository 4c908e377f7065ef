#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wg {

class MeasureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sparse polynomial in (x, y) = (w1, w2). Terms are kept merged and nonzero.
class Poly2 {
public:
    using Exponents = std::pair<int, int>;

    Poly2() = default;
    static Poly2 constant(double c);
    static Poly2 monomial(double c, int e1, int e2);
    static Poly2 x() { return monomial(1.0, 1, 0); }
    static Poly2 y() { return monomial(1.0, 0, 1); }
    // a x + b y + c
    static Poly2 linear(double a, double b, double c);

    Poly2 operator+(const Poly2& o) const;
    Poly2 operator-(const Poly2& o) const;
    Poly2 operator*(const Poly2& o) const;
    Poly2 operator-() const { return scaled(-1.0); }
    Poly2 scaled(double s) const;
    Poly2& addTerm(double c, int e1, int e2);

    int degree() const;
    bool isZero() const { return terms_.empty(); }
    double eval(double x, double y) const;
    // coefficients of p(., y) in ascending powers of x
    std::vector<double> restrictY(double y) const;
    // p(x / t, y)
    Poly2 dilatedX(double t) const;

    const std::map<Exponents, double>& terms() const { return terms_; }
    bool operator==(const Poly2& o) const { return terms_ == o.terms_; }

private:
    std::map<Exponents, double> terms_;
};

Poly2 square(const Poly2& p);

namespace uni {

double eval(const std::vector<double>& p, double x);
std::vector<double> derivative(const std::vector<double>& p);
void trim(std::vector<double>& p);

// Counts bisection steps across one slice; throws MeasureError when exhausted.
struct RootBudget {
    long remaining = 200000;
    void spend() {
        if (--remaining < 0) throw MeasureError("root isolation budget exceeded");
    }
};

// All real roots of p on [a, b], ascending, each refined to relative width tol.
// Monotone pieces are found from the roots of p' (recursively), then each sign
// change is bisected. Roots of even multiplicity are returned when hit exactly.
std::vector<double> realRoots(const std::vector<double>& p, double a, double b, RootBudget& budget,
                              double tol = 1e-12);

}  // namespace uni

}  // namespace wg
