#include "tgcast/checksum.hpp"

#include <array>

namespace tgcast {

std::string checksum_hex(std::string_view data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::array<char, 16> out{};
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return std::string(out.data(), out.size());
}

}  // namespace tgcast
