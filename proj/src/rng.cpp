#include "walklab/rng.hpp"

#include <cmath>

namespace walklab {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) {
    std::array<std::uint64_t, 4> c = counter;
    std::array<std::uint64_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

void RandomStream::refill() {
    buffer_ = philox4x64(counter_, key_);
    buffer_pos_ = 0;
    for (int i = 0; i < 4; ++i) {
        if (++counter_[i] != 0) break;
    }
}

std::uint64_t RandomStream::next_u64() {
    if (buffer_pos_ >= 4) refill();
    return buffer_[buffer_pos_++];
}

double RandomStream::uniform() {
    // 53-bit mantissa, shifted into (0, 1].
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::gaussian() {
    if (has_cached_gaussian_) {
        has_cached_gaussian_ = false;
        return cached_gaussian_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_gaussian_ = r * std::sin(a);
    has_cached_gaussian_ = true;
    return r * std::cos(a);
}

}  // namespace walklab
