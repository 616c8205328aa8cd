#pragma once

#include <cstdint>

namespace oscint {

// splitmix64 finaliser.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based stream derivation: the seed for draw `counter` of stream
// `stream` depends only on (root, stream, counter), never on call order.
inline std::uint64_t split_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t counter = 0) {
    return mix64(mix64(mix64(root) ^ stream) ^ counter);
}

}  // namespace oscint
