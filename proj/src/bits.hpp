#pragma once

#include <cstdint>

#if defined(__BMI2__)
#include <immintrin.h>
#endif

namespace rs::bits {

// gather the bits of v selected by m into the low bits
inline std::uint64_t compress(std::uint64_t v, std::uint64_t m) {
#if defined(__BMI2__)
    return _pext_u64(v, m);
#else
    std::uint64_t out = 0;
    int j = 0;
    for (; m; m &= m - 1, ++j)
        if (v & (m & (~m + 1))) out |= std::uint64_t(1) << j;
    return out;
#endif
}

}  // namespace rs::bits
