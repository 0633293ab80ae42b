#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tgcast {

// FNV-1a 64-bit. Used to fingerprint templates and config snapshots so
// artifacts produced under different settings refuse to merge.
constexpr std::uint64_t fnv1a64(std::string_view data) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string checksum_hex(std::string_view data);

}  // namespace tgcast
