#pragma once

#include <array>
#include <cstdint>

#include "locreq/normal.hpp"

namespace locreq {

// Deterministic, splittable random source used by the simulator.
//
// Engine: xoshiro256++ (Blackman & Vigna). Stream derivation rule: the
// four state words of stream i are the first four outputs of SplitMix64
// seeded with (seed + GOLDEN * (i + 1)), GOLDEN = 0x9E3779B97F4A7C15.
// The rule is part of the report-reproducibility contract: the same
// (seed, stream) pair yields the same draw sequence on any platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

class Xoshiro256pp {
public:
    static Xoshiro256pp for_stream(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 sm(seed + 0x9E3779B97F4A7C15ull * (stream + 1));
        Xoshiro256pp rng;
        for (auto& word : rng.s_) word = sm.next();
        return rng;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in the open interval (0, 1): 53-bit mantissa, half-step
    // offset keeps both endpoints out so the quantile stays finite.
    double uniform_open01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Zero-mean Gaussian via the inverse-CDF method; avoids the
    // implementation-defined std::normal_distribution so that draw
    // sequences are identical across standard libraries.
    double gaussian(double sigma) { return sigma * norm_quantile(uniform_open01()); }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace locreq
