#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mixamp {

/// Counter-based random stream (Philox4x32-10).
///
/// Every output is a pure function of (master_seed, stream_index, draw_index),
/// so two streams with the same key replay the same sequence on any platform,
/// and trials can be scheduled in any order without changing their draws.
/// Satisfies std::uniform_random_bit_generator.
class SeededStream {
public:
    using result_type = std::uint64_t;

    SeededStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;

    /// Standard normal via Box-Muller (both variates are used).
    double normal() noexcept;

    std::uint64_t master_seed() const noexcept { return seed_; }
    std::uint64_t stream_index() const noexcept { return stream_; }
    /// Number of 64-bit words consumed so far.
    std::uint64_t draws() const noexcept { return counter_ * 2 - (buffered_ ? 1 : 0); }

    /// Raw Philox4x32-10 block function, exposed for known-answer tests.
    static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::uint64_t spare_word_ = 0;
    bool buffered_ = false;
    double spare_normal_ = 0.0;
    bool has_spare_normal_ = false;
};

}  // namespace mixamp
