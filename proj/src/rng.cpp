#include "invwish/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace invwish {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c[0] = hi1 ^ c[1] ^ k[0];
    c[1] = lo1;
    c[2] = hi0 ^ c[3] ^ k[1];
    c[3] = lo0;
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id) {}

void RngStream::refill() {
    block_ = {static_cast<std::uint32_t>(counter_),
              static_cast<std::uint32_t>(counter_ >> 32),
              static_cast<std::uint32_t>(stream_),
              static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                        static_cast<std::uint32_t>(seed_ >> 32)};
    for (int r = 0; r < 10; ++r) {
        philox_round(block_, key);
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    ++counter_;
    block_pos_ = 0;
}

std::uint64_t RngStream::next_u64() {
    if (block_pos_ >= 4) refill();
    const std::uint64_t lo = block_[block_pos_];
    const std::uint64_t hi = block_[block_pos_ + 1];
    block_pos_ += 2;
    return lo | (hi << 32);
}

double RngStream::next_unit() {
    // 53 random bits shifted into (0,1); never returns an endpoint.
    const std::uint64_t u = next_u64() >> 11;
    return (static_cast<double>(u) + 0.5) * 0x1p-53;
}

double RngStream::next_gaussian() {
    if (has_cached_gaussian_) {
        has_cached_gaussian_ = false;
        return cached_gaussian_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_gaussian_ = r * std::sin(theta);
    has_cached_gaussian_ = true;
    return r * std::cos(theta);
}

double RngStream::next_gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be > 0");
    if (shape < 1.0) {
        const double g = next_gamma(shape + 1.0);
        return g * std::pow(next_unit(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = next_gaussian();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_unit();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

std::complex<double> RngStream::next_complex_gaussian() {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const double re = next_gaussian();
    const double im = next_gaussian();
    return {re * inv_sqrt2, im * inv_sqrt2};
}

} // namespace invwish
