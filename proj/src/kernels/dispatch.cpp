#include "cluspath/kernels.hpp"

#include <cstdlib>
#include <string>

#include "cluspath/error.hpp"
#include "cluspath/log.hpp"

namespace cluspath::kernels {
namespace {

constexpr KernelTable kScalarTable{Isa::scalar, &scalar::squared_distance, &scalar::axpy,
                                   &scalar::squared_distances};

#if defined(CLUSPATH_WITH_AVX2)
constexpr KernelTable kAvx2Table{Isa::avx2, &avx2::squared_distance, &avx2::axpy,
                                 &avx2::squared_distances};
#endif

const KernelTable& select_default() {
    if (const char* forced = std::getenv("CLUSPATH_KERNEL"); forced != nullptr && *forced) {
        const std::string name(forced);
        if (name == "scalar") {
            return kScalarTable;
        }
        if (name == "avx2" && isa_available(Isa::avx2)) {
            return table(Isa::avx2);
        }
        log::warn("CLUSPATH_KERNEL=" + name + " is not available here; using the default kernels");
    }
    if (isa_available(Isa::avx2)) {
        return table(Isa::avx2);
    }
    return kScalarTable;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(CLUSPATH_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!isa_available(isa)) {
        throw DomainError("kernel variant '" + std::string(isa_name(isa)) + "' is not available");
    }
#if defined(CLUSPATH_WITH_AVX2)
    if (isa == Isa::avx2) {
        return kAvx2Table;
    }
#endif
    return kScalarTable;
}

const KernelTable& active() noexcept {
    static const KernelTable& selected = select_default();
    return selected;
}

}  // namespace cluspath::kernels
