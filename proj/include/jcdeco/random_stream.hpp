// random_stream.hpp: counter-based uniform variates (Philox4x32-10)
//
// Every draw is a pure function of (seed, sample index, slot), so any partition of the
// samples across threads reproduces the same numbers.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace jcdeco {

class PhiloxStream {
public:
    explicit PhiloxStream(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    // Four independent 32-bit words for counter (index, block).
    std::array<std::uint32_t, 4> block(std::uint64_t index, std::uint64_t block_id) const noexcept {
        std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(index),
                                         static_cast<std::uint32_t>(index >> 32),
                                         static_cast<std::uint32_t>(block_id),
                                         static_cast<std::uint32_t>(block_id >> 32)};
        std::array<std::uint32_t, 2> key = key_;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

    // Uniform double in [0, 1) with 53 random bits; slot selects one of two variates per block.
    double uniform(std::uint64_t index, std::uint64_t slot) const noexcept {
        const auto w = block(index, slot / 2);
        const std::size_t off = (slot % 2) * 2;
        const std::uint64_t bits = (std::uint64_t{w[off]} << 32 | w[off + 1]) >> 11;
        return static_cast<double>(bits) * 0x1.0p-53;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    std::array<std::uint32_t, 2> key_;
};

}  // namespace jcdeco
