#pragma once

#include <array>
#include <cstdint>

namespace lmmbic {

/**
 * Philox4x64-10 counter-based generator (Salmon et al., SC'11).
 *
 * The output block is a pure function of (counter, key), which is what makes
 * stream splitting trivial: any tuple of indices can be packed into the
 * counter and the draws for that tuple never depend on what else was drawn.
 */
struct Philox4x64 {
    using Counter = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;
    using Block = std::array<std::uint64_t, 4>;

    static Block generate(Counter counter, Key key) noexcept;
};

// SplitMix64 finalizer; used to fold several indices into one 64-bit seed.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Deterministically combine a seed with an ordered list of indices.
template <typename... Ts>
std::uint64_t derive_seed(std::uint64_t seed, Ts... parts) noexcept {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    ((h = mix64(h ^ (static_cast<std::uint64_t>(parts) + 0x9e3779b97f4a7c15ULL))), ...);
    return h;
}

/**
 * A sequential view onto one Philox stream.
 *
 * Stream layout: key = {seed, kKeyTag}; counter = {draw, id0, id1, id2}.
 * The three id words name the stream (e.g. {purpose, subject, observation});
 * the first counter word walks through the stream's blocks. Two streams with
 * different ids share no blocks, so they are independent of evaluation order.
 */
class RandomStream {
public:
    using StreamId = std::array<std::uint64_t, 3>;

    RandomStream(std::uint64_t seed, StreamId id) noexcept;

    std::uint64_t next_u64() noexcept;
    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    // Standard normal via Box-Muller (one variate per two uniforms).
    double normal() noexcept;
    double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

private:
    static constexpr std::uint64_t kKeyTag = 0x4c4d4d4249435631ULL;

    Philox4x64::Key key_;
    StreamId id_;
    std::uint64_t block_index_ = 0;
    Philox4x64::Block buffer_{};
    int position_ = 4;
};

// Purpose tags for the first stream-id word.
enum class StreamPurpose : std::uint64_t {
    kTruth = 1,
    kSubject = 2,
    kObservation = 3,
    kFitJitter = 4,
};

}  // namespace lmmbic
