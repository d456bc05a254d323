// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace hardy::sampling {

/// Philox4x32-10 block function (Salmon et al., SC'11): a keyed bijection on
/// 128-bit counters.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter c, Key k) {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                k[0] += 0x9E3779B9u;
                k[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
            c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        }
        return c;
    }
};

/// Stream purposes; each gets a disjoint counter range under one seed.
enum class StreamTag : std::uint32_t {
    xx = 0,
    xp = 1,
    px = 2,
    pp = 3,
    messages_xx = 4,
    messages_xp = 5,
    messages_px = 6,
    messages_pp = 7,
    trials = 9,
    lhv_suite = 10,
};

/// Random stream `index` under `seed`: key = seed, counter = (index, tag, block).
/// Draw k of a stream is a pure function of (seed, tag, index, k), so work
/// split across threads reproduces the serial sequence exactly.
class Stream {
public:
    Stream(std::uint64_t seed, StreamTag tag, std::uint64_t index)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
               static_cast<std::uint32_t>(tag), 0u} {}

    std::uint32_t next_u32() {
        if (used_ == 4) refill();
        return out_[used_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

private:
    void refill() {
        out_ = Philox4x32::block(ctr_, key_);
        ++ctr_[3];
        used_ = 0;
    }

    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter out_{};
    int used_ = 4;
};

}  // namespace hardy::sampling
