#pragma once

#include <cstdint>
#include <string_view>

namespace seal {

// FNV-1a, used for key-pool splits and config fingerprints in report headers.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace seal
