#include "mixamp/rng.hpp"

#include <cmath>
#include <numbers>

namespace mixamp {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> SeededStream::philox(std::array<std::uint32_t, 4> c,
                                                  std::array<std::uint32_t, 2> k) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

SeededStream::SeededStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
    : seed_(master_seed), stream_(stream_index) {}

SeededStream::result_type SeededStream::operator()() noexcept {
    if (buffered_) {
        buffered_ = false;
        return spare_word_;
    }
    const auto out = philox(
        {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
         static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    ++counter_;
    spare_word_ = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    buffered_ = true;
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

double SeededStream::uniform() noexcept {
    constexpr double kScale = 0x1.0p-53;
    return (static_cast<double>((*this)() >> 11) + 0.5) * kScale;
}

double SeededStream::normal() noexcept {
    if (has_spare_normal_) {
        has_spare_normal_ = false;
        return spare_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    has_spare_normal_ = true;
    return radius * std::cos(angle);
}

}  // namespace mixamp
