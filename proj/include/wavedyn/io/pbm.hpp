#pragma once

// Raw PBM (P4) image of a recurrence window: set bit = recurrent pair, origin
// at the lower-left corner.

#include <cstdint>
#include <string>
#include <vector>

#include "wavedyn/tsa/recurrence.hpp"

namespace wavedyn::io {

inline std::string recurrence_pbm(const tsa::RecurrenceData& rd) {
    const std::size_t n = rd.n_points;
    const std::size_t row_bytes = (n + 7) / 8;
    std::vector<std::uint8_t> bits(row_bytes * n, 0);
    for (const auto& [i, j] : rd.pairs) {
        const std::size_t row = n - 1 - j;  // j grows upward
        bits[row * row_bytes + i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    std::string out = "P4\n" + std::to_string(n) + " " + std::to_string(n) + "\n";
    out.append(reinterpret_cast<const char*>(bits.data()), bits.size());
    return out;
}

}  // namespace wavedyn::io
