#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace jass {

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives a child key from (key, tag, a, b). Distinct tags yield
/// statistically independent streams, which is what makes per-trial,
/// per-component seeding order-independent and parallel-safe.
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t tag,
                                   std::uint64_t a = 0, std::uint64_t b = 0) noexcept {
    std::uint64_t h = mix64((key ^ tag) + 0x9E3779B97F4A7C15ULL);
    h = mix64((h ^ a) + 0xD1B54A32D192ED03ULL);
    h = mix64((h ^ b) + 0x8CB92BA72F3D8DD7ULL);
    return h;
}

/// Counter-based random stream: output i is a fixed mix of (key, i), so a
/// stream is fully determined by its key and supports cheap forking.
class RandomStream {
public:
    RandomStream() = default;
    explicit RandomStream(std::uint64_t key) : key_(key) {}

    std::uint64_t key() const noexcept { return key_; }

    std::uint64_t next_u64() noexcept {
        return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++ctr_);
    }

    /// Uniform double in [0, 1).
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform index in {0, ..., n-1}; n >= 1.
    std::size_t next_index(std::size_t n) noexcept {
        auto idx = static_cast<std::size_t>(next_double() * static_cast<double>(n));
        return idx < n ? idx : n - 1;
    }

    /// Circularly-symmetric complex Gaussian CN(0,1): real and imaginary
    /// parts are independent N(0, 1/2), so E|z|^2 = 1.
    std::complex<double> next_cn() noexcept;

    /// Child stream derived from (key, current position, idx); advances
    /// this stream by one step.
    RandomStream fork(std::uint64_t idx) noexcept {
        std::uint64_t c = ++ctr_;
        return RandomStream(derive_key(key_, 0x666F726B5F746167ULL, c, idx));
    }

private:
    std::uint64_t key_ = 0;
    std::uint64_t ctr_ = 0;
};

} // namespace jass
