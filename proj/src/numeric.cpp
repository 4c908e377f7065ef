#include "wg/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace wg {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = std::uint64_t(a) * std::uint64_t(b);
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
}

constexpr int kLimbs = 72;
constexpr int kOffset = 1152;  // bit position of 2^0
constexpr int kMaxPending = 1 << 29;

}  // namespace

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

Philox::Philox(std::uint64_t seed, const std::string& stream) {
    const std::uint64_t k = seed ^ fnv1a(stream);
    key_ = {std::uint32_t(k), std::uint32_t(k >> 32)};
}

std::array<std::uint32_t, 4> Philox::block(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kW0;
            key[1] += kW1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, ctr[0], hi0, lo0);
        mulhilo(kM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::uint32_t Philox::next32() {
    if (buffered_ == 4) {
        buf_ = block({std::uint32_t(counter_), std::uint32_t(counter_ >> 32), std::uint32_t(hi_),
                      std::uint32_t(hi_ >> 32)},
                     key_);
        ++counter_;
        buffered_ = 0;
    }
    return buf_[std::size_t(buffered_++)];
}

std::uint64_t Philox::next64() {
    const std::uint64_t a = next32();
    return (a << 32) | next32();
}

double Philox::uniform() { return (double(next64() >> 11) + 0.5) * 0x1.0p-53; }

double Philox::normal() {
    if (hasSpare_) {
        hasSpare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double th = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(th);
    hasSpare_ = true;
    return r * std::cos(th);
}

cplx Philox::complexNormal() {
    const double a = normal(), b = normal();
    return cplx(a, b) * std::sqrt(0.5);
}

std::uint64_t Philox::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below(0)");
    const std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = next64();
    while (x >= lim);
    return x % n;
}

Philox Philox::substream(std::uint64_t member) const {
    Philox p(key_[0], key_[1]);
    p.hi_ = member + 1;
    return p;
}

ExactSum::ExactSum() : limbs_(kLimbs, 0) {}

void ExactSum::add(double x) {
    if (x == 0.0) return;
    if (!std::isfinite(x)) throw std::domain_error("ExactSum: non-finite term");
    int e = 0;
    const double m = std::frexp(x, &e);
    const auto mant = std::int64_t(std::ldexp(m, 53));
    const int p = e - 53 + kOffset;
    if (p < 0 || p + 85 >= 32 * kLimbs) throw std::domain_error("ExactSum: exponent out of range");
    const int q = p / 32, r = p % 32;
    const unsigned __int128 mag = (unsigned __int128)(std::uint64_t)(mant < 0 ? -mant : mant) << r;
    const std::int64_t sign = mant < 0 ? -1 : 1;
    limbs_[std::size_t(q)] += sign * std::int64_t(std::uint32_t(mag));
    limbs_[std::size_t(q + 1)] += sign * std::int64_t(std::uint32_t(mag >> 32));
    limbs_[std::size_t(q + 2)] += sign * std::int64_t(std::uint32_t(mag >> 64));
    if (++pending_ >= kMaxPending) normalize();
}

void ExactSum::addProduct(const double* factors, int count) {
    if (count <= 0) return;
    double terms[64];
    int n = 1;
    terms[0] = factors[0];
    for (int i = 1; i < count; ++i) {
        if (2 * n > 64) throw std::length_error("ExactSum: too many factors");
        const double g = factors[i];
        int m = 0;
        double next[64];
        for (int j = 0; j < n; ++j) {
            const double p = terms[j] * g;
            const double err = std::fma(terms[j], g, -p);
            if (p != 0.0) next[m++] = p;
            if (err != 0.0) next[m++] = err;
        }
        std::copy(next, next + m, terms);
        n = m;
        if (n == 0) return;
    }
    for (int j = 0; j < n; ++j) add(terms[j]);
}

void ExactSum::normalize() {
    for (int i = 0; i + 1 < kLimbs; ++i) {
        const std::int64_t carry = limbs_[std::size_t(i)] >> 32;
        limbs_[std::size_t(i)] -= carry * (std::int64_t(1) << 32);
        limbs_[std::size_t(i + 1)] += carry;
    }
    pending_ = 0;
}

void ExactSum::merge(const ExactSum& other) {
    normalize();
    ExactSum o = other;
    o.normalize();
    for (int i = 0; i < kLimbs; ++i) limbs_[std::size_t(i)] += o.limbs_[std::size_t(i)];
    normalize();
}

bool ExactSum::isZero() const { return value() == 0.0; }

double ExactSum::value() const {
    ExactSum c = *this;
    c.normalize();
    double sign = 1.0;
    if (c.limbs_.back() < 0) {
        sign = -1.0;
        for (auto& l : c.limbs_) l = -l;
        c.normalize();
    }
    int t = kLimbs - 1;
    while (t >= 0 && c.limbs_[std::size_t(t)] == 0) --t;
    if (t < 0) return 0.0;
    auto limb = [&](int i) -> unsigned __int128 { return i < 0 ? 0 : (unsigned __int128)(std::uint64_t)c.limbs_[std::size_t(i)]; };
    const unsigned __int128 acc = (limb(t) << 64) | (limb(t - 1) << 32) | limb(t - 2);
    bool sticky = false;
    for (int i = 0; i < t - 2; ++i) sticky = sticky || c.limbs_[std::size_t(i)] != 0;
    int nbits = 0;
    for (unsigned __int128 a = acc; a != 0; a >>= 1) ++nbits;
    const int base = 32 * (t - 2) - kOffset;
    const int shift = nbits - 53;
    if (shift <= 0) return sign * std::ldexp(double(std::uint64_t(acc)), base);
    std::uint64_t mant = std::uint64_t(acc >> shift);
    const unsigned __int128 rem = acc & ((((unsigned __int128)1) << shift) - 1);
    const unsigned __int128 half = ((unsigned __int128)1) << (shift - 1);
    if (rem > half || (rem == half && (sticky || (mant & 1u)))) ++mant;
    return sign * std::ldexp(double(mant), base + shift);
}

int fastFftSize(int n) {
    for (int m = std::max(n, 1);; ++m) {
        int r = m;
        for (int p : {2, 3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

void parallelFor(std::size_t count, int threads, const std::function<void(std::size_t, std::size_t, int)>& body) {
    const int t = int(std::min<std::size_t>(std::size_t(std::max(threads, 1)), std::max<std::size_t>(count, 1)));
    if (t <= 1) {
        body(0, count, 0);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + std::size_t(t) - 1) / std::size_t(t);
    for (int i = 0; i < t; ++i) {
        const std::size_t b = std::size_t(i) * chunk, e = std::min(count, b + chunk);
        if (b >= e) break;
        pool.emplace_back(body, b, e, i);
    }
    for (auto& th : pool) th.join();
}

LineFit fitLine(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fitLine: need >= 2 points");
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fitLine: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        f.residuals.push_back(r);
        if (y[i] != 0.0) f.maxRelResidual = std::max(f.maxRelResidual, std::abs(r / y[i]));
    }
    return f;
}

}  // namespace wg
