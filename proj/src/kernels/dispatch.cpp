#include <atomic>
#include <cstring>

#include "walklab/errors.hpp"
#include "walklab/kernels.hpp"

namespace walklab::kernels {

namespace {

const KernelTable* best_supported() {
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& active() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (!t) {
        t = best_supported();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void force_variant(const char* name) {
    if (std::strcmp(name, "auto") == 0) {
        g_active.store(best_supported(), std::memory_order_release);
    } else if (std::strcmp(name, "scalar") == 0) {
        g_active.store(&scalar_kernels(), std::memory_order_release);
    } else if (std::strcmp(name, "avx2") == 0) {
        const KernelTable* t = avx2_kernels();
        if (!t) throw Error("avx2 kernels not supported on this machine");
        g_active.store(t, std::memory_order_release);
    } else {
        throw Error(std::string("unknown kernel variant: ") + name);
    }
}

}  // namespace walklab::kernels
