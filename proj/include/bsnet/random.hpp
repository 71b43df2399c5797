#ifndef BSNET_RANDOM_HPP_
#define BSNET_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace bsnet {

// splitmix64 finaliser, used to derive independent stream seeds from a key.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

/// Random source for one simulated inventory period. Streams for different
/// trials are keyed on (seed, trial), so any execution order reproduces the
/// same draws.
class TrialStream {
  public:
    explicit TrialStream(std::uint64_t seed) : engine_(seed) {}

    static TrialStream for_trial(std::uint64_t seed, std::uint64_t trial) {
        return TrialStream(derive_seed(seed, trial, 0x7a11));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

/// Integer threshold t such that P(u < t) = p for u uniform over 64 bits.
inline std::uint64_t probability_threshold(double p) {
    if (p <= 0.0)
        return 0;
    if (p >= 1.0)
        return ~std::uint64_t{0};
    return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

} // namespace bsnet

#endif // BSNET_RANDOM_HPP_
