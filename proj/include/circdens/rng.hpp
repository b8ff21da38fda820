#pragma once

#include <cstdint>
#include <random>

namespace circdens {

//! splitmix64 step; used for seed mixing only.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

//! Derive an independent stream seed from (seed, stream). Replication r of a
//! Monte Carlo run always draws from derive_seed(seed, r), so results do not
//! depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ull * (stream + 1));
    splitmix64(s);
    return splitmix64(s);
}

//! Deterministic random source. mt19937_64 is fully specified by the
//! standard and the uniform mapping below is fixed, so identical seeds give
//! identical draws on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    //! Uniform double in [0, 1), 53 random bits.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace circdens
