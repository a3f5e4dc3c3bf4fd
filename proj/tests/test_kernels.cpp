#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <vector>

#include "walklab/kernels.hpp"
#include "walklab/params.hpp"
#include "walklab/rng.hpp"
#include "walklab/walk.hpp"

using namespace walklab;

namespace {

struct Buffers {
    std::vector<double> br, bi, Br, Bi;
    explicit Buffers(std::size_t n) : br(n), bi(n), Br(n), Bi(n) {}
};

Buffers random_state(std::size_t n, std::uint64_t seed) {
    Buffers b(n);
    RandomStream rng(seed, 99);
    for (std::size_t i = 0; i < n; ++i) {
        b.br[i] = rng.gaussian();
        b.bi[i] = rng.gaussian();
        b.Br[i] = rng.gaussian();
        b.Bi[i] = rng.gaussian();
    }
    return b;
}

}  // namespace

TEST_CASE("avx2 coin_shift is bitwise equal to the scalar reference") {
    const kernels::KernelTable* avx2 = kernels::avx2_kernels();
    if (!avx2) return;  // machine without avx2: dispatch covers scalar only
    const kernels::CoinMatrix u = {0.3, -0.5, 0.2, 0.7, 0.7, 0.2, -0.5, 0.3};
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 63u, 64u, 1000u}) {
        const Buffers in = random_state(n, n);
        Buffers a(n + 1), b(n + 1);
        kernels::scalar_kernels().coin_shift(in.br.data(), in.bi.data(), in.Br.data(),
                                             in.Bi.data(), a.br.data(), a.bi.data(), a.Br.data(),
                                             a.Bi.data(), n, u);
        avx2->coin_shift(in.br.data(), in.bi.data(), in.Br.data(), in.Bi.data(), b.br.data(),
                         b.bi.data(), b.Br.data(), b.Bi.data(), n, u);
        CHECK(std::memcmp(a.br.data() + 1, b.br.data() + 1, n * sizeof(double)) == 0);
        CHECK(std::memcmp(a.bi.data() + 1, b.bi.data() + 1, n * sizeof(double)) == 0);
        CHECK(std::memcmp(a.Br.data(), b.Br.data(), n * sizeof(double)) == 0);
        CHECK(std::memcmp(a.Bi.data(), b.Bi.data(), n * sizeof(double)) == 0);
    }
}

TEST_CASE("avx2 site_prob is bitwise equal to the scalar reference") {
    const kernels::KernelTable* avx2 = kernels::avx2_kernels();
    if (!avx2) return;
    for (std::size_t n : {1u, 4u, 5u, 127u, 4096u}) {
        const Buffers in = random_state(n, 3 * n + 1);
        std::vector<double> pa(n), pb(n);
        kernels::scalar_kernels().site_prob(in.br.data(), in.bi.data(), in.Br.data(),
                                            in.Bi.data(), pa.data(), n);
        avx2->site_prob(in.br.data(), in.bi.data(), in.Br.data(), in.Bi.data(), pb.data(), n);
        CHECK(std::memcmp(pa.data(), pb.data(), n * sizeof(double)) == 0);
    }
}

TEST_CASE("evolution result does not depend on the dispatched variant") {
    const kernels::KernelTable* avx2 = kernels::avx2_kernels();
    if (!avx2) return;
    const WalkParams p = build_params({0.2, -0.3, 0.8, 0.1, 0.4, 0.7}, 0.05);
    kernels::force_variant("scalar");
    const LatticeDist a = evolve(p, 300);
    kernels::force_variant("avx2");
    const LatticeDist b = evolve(p, 300);
    kernels::force_variant("auto");
    REQUIRE(a.probs.size() == b.probs.size());
    CHECK(std::memcmp(a.probs.data(), b.probs.data(), a.probs.size() * sizeof(double)) == 0);
}

TEST_CASE("force_variant rejects unknown names") {
    CHECK_THROWS(kernels::force_variant("sse9"));
    kernels::force_variant("auto");
}
