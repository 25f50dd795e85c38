#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace couponrl {

// SplitMix64 step; used only to derive well-separated substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= tag * 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x632be59bd9b4e019ULL);
}

/// Seedable pseudo-random stream. All simulation randomness goes through the
/// primitives below so that draw positions are well defined and replays are
/// bit-identical. The engine is std::mt19937_64, whose output sequence is
/// mandated by the standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// One uniform consumed.
    bool bernoulli(double p) { return uniform() < p; }

    /// One uniform consumed; CDF walk over `probs` (assumed to sum to ~1).
    int categorical(std::span<const double> probs) {
        double u = uniform();
        double acc = 0.0;
        int last = static_cast<int>(probs.size()) - 1;
        for (int i = 0; i < last; ++i) {
            acc += probs[i];
            if (u < acc) return i;
        }
        return last;
    }

    /// One uniform consumed; integer in [0, n).
    int uniform_int(int n) { return static_cast<int>(uniform() * n) % n; }

private:
    std::mt19937_64 engine_;
};

/// Derives an independent substream of `seed` identified by `tag`.
inline Rng make_substream(std::uint64_t seed, std::uint64_t tag) {
    return Rng(substream_seed(seed, tag));
}

// Documented substream tags. Keeping them in one place makes the draw layout
// auditable: a given (seed, tag) pair always yields the same stream no matter
// what other components consume.
namespace stream_tag {
inline constexpr std::uint64_t kEnv = 0;        // environment draws (coupon types, transitions)
inline constexpr std::uint64_t kCollector = 1;  // OCCP collector coin flips
inline constexpr std::uint64_t kSchedule = 2;   // lifelong task-identity draws
inline constexpr std::uint64_t kProbeCoin = 3;  // lifelong probe-vs-exploit coins
inline constexpr std::uint64_t kTaskBase = 16;  // per-task stepping stream = kTaskBase + task index
}  // namespace stream_tag

}  // namespace couponrl
