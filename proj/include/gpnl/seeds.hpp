// SPDX-License-Identifier: Apache-2.0

#ifndef GPNL_SEEDS_HPP
#define GPNL_SEEDS_HPP

#include <cstdint>
#include <string_view>

namespace gpnl {

/// Named-stream seed splitting: sub-streams are derived by hashing the stream
/// name into the master seed, so adding streams never perturbs existing ones.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t sub_seed(std::uint64_t master, std::string_view stream) {
    return splitmix64(master ^ fnv1a(stream));
}

} // namespace gpnl

#endif
