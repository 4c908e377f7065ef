#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wg/lattice.hpp"

namespace wg {

// Philox4x32-10 (Salmon et al. 2011). A stream is keyed by (seed, name hash);
// draws are addressed by a 64-bit counter, so member k of an ensemble is
// reproducible on its own.
class Philox {
public:
    static constexpr const char* kAlgorithmId = "philox4x32-10";

    Philox(std::uint64_t seed, const std::string& stream);
    Philox(std::uint32_t key0, std::uint32_t key1) : key_{key0, key1} {}

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key);

    void seek(std::uint64_t counter) { counter_ = counter; buffered_ = 4; }
    std::uint32_t next32();
    std::uint64_t next64();
    double uniform();   // in (0,1)
    double normal();
    cplx complexNormal();  // E|z|^2 = 1
    std::uint64_t below(std::uint64_t n);

    Philox substream(std::uint64_t member) const;

private:
    std::array<std::uint32_t, 2> key_{};
    std::uint64_t counter_ = 0;
    std::uint64_t hi_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int buffered_ = 4;
    bool hasSpare_ = false;
    double spare_ = 0.0;
};

std::uint64_t fnv1a(const std::string& s);

// Exact accumulation of sums of doubles and of products of doubles; value()
// is the correctly rounded total, independent of summation order.
class ExactSum {
public:
    ExactSum();
    void add(double x);
    void addProduct(const double* factors, int count);
    void merge(const ExactSum& other);
    double value() const;
    bool isZero() const;

private:
    void normalize();
    std::vector<std::int64_t> limbs_;
    int pending_ = 0;
};

// smallest integer >= n whose prime factors are all in {2,3,5,7}
int fastFftSize(int n);

void parallelFor(std::size_t count, int threads, const std::function<void(std::size_t, std::size_t, int)>& body);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> residuals;
    double maxRelResidual = 0.0;  // max |y - fit| / |y|
};

LineFit fitLine(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wg
