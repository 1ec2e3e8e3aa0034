#pragma once

#include <cmath>
#include <cstdint>

namespace wavg {

/// SplitMix64 (Steele/Lea/Flood splittable generator, Vigna's fixed-increment
/// variant).  64 bits of state, full-period, passes BigCrush; used here both
/// as the base stream and, via its stateless form, to derive independent
/// sub-streams from (seed, index) keys so that every run and every SGD step
/// is reproducible across platforms.
class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

/// The index-th output of SplitMix64(seed) without stepping through the
/// stream (the increment is a fixed constant, so the state at any index is a
/// closed form).  This is the counter-based access used for seed derivation.
constexpr std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derive the seed of an independent sub-stream from (base, index).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return splitmix64_at(base, index);
}

/// A stream of uniform and Gaussian variates for one key.  Gaussian draws use
/// the Marsaglia polar method (rejection; no trig), with the spare variate
/// cached, so a stream yields a fixed sequence for a fixed key.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) noexcept : core_(seed) {}
    RngStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : core_(derive_seed(seed, stream)) {}

    std::uint64_t next_u64() noexcept { return core_.next(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() noexcept {
        return static_cast<double>(core_.next() >> 11) * 0x1.0p-53;
    }

    /// Standard normal variate.
    double next_gaussian() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        for (;;) {
            const double u = 2.0 * next_unit() - 1.0;
            const double v = 2.0 * next_unit() - 1.0;
            const double s = u * u + v * v;
            if (s >= 1.0 || s == 0.0) continue;
            const double f = std::sqrt(-2.0 * std::log(s) / s);
            spare_ = v * f;
            has_spare_ = true;
            return u * f;
        }
    }

    /// Uniform index in [0, n).
    std::uint64_t next_index(std::uint64_t n) noexcept {
        // multiply-shift map of a 64-bit draw onto [0, n); bias is O(n/2^64)
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(core_.next()) * n) >> 64);
    }

  private:
    SplitMix64 core_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace wavg
