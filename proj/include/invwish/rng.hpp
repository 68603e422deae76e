#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace invwish {

/// Counter-based splittable random stream (Philox4x32-10).
///
/// Streams keyed by (seed, stream_id) are statistically independent and
/// reproduce bit-for-bit on the same build. Replicated Monte Carlo runs
/// assign one stream per replica index, which makes results independent
/// of thread scheduling.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double next_unit();

    /// Standard normal, Box-Muller.
    double next_gaussian();

    /// Gamma(shape, 1) for any real shape > 0 (Marsaglia-Tsang,
    /// with the boost U^(1/k) for shape < 1).
    double next_gamma(double shape);

    /// Standard complex Gaussian with E|g|^2 = 1
    /// (real and imaginary parts independent N(0, 1/2)).
    std::complex<double> next_complex_gaussian();

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int block_pos_ = 4;
    bool has_cached_gaussian_ = false;
    double cached_gaussian_ = 0.0;
};

} // namespace invwish
