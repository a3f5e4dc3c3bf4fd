#pragma once

#include <array>
#include <cstdint>

namespace walklab {

// Philox4x64-10 counter-based generator. A stream is keyed by (seed, stream
// id); outputs depend only on (key, counter), so chains drawing from their
// own streams are reproducible independent of thread count and schedule.
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // Uniform on (0, 1]; never returns 0, safe under log().
    double uniform();

    // Standard normal via Box-Muller; consumes two uniforms per pair.
    double gaussian();

  private:
    void refill();

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_{};
    std::array<std::uint64_t, 4> buffer_{};
    int buffer_pos_ = 4;
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

}  // namespace walklab
