#pragma once

#include <array>
#include <cstdint>

namespace qperc {

// Philox4x32-10 counter-based generator. Each (key, stream, trial) triple
// names an independent substream; draws are a pure function of the counter,
// so trial results do not depend on scheduling or thread count.
class Philox {
public:
    Philox(uint64_t master_seed, uint32_t stream, uint32_t trial)
        : key_{static_cast<uint32_t>(master_seed),
               static_cast<uint32_t>(master_seed >> 32)},
          ctr_{0, 0, trial, stream} {}

    // Raw one-block evaluation, exposed for known-answer tests.
    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                         std::array<uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            ctr = round_once(ctr, key);
            bump_key(key);
        }
        return ctr;
    }

    uint32_t next_u32() {
        if (pos_ == 8) refill();
        return buf_[pos_++];
    }

    uint64_t next_u64() {
        const uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    static std::array<uint32_t, 4> round_once(const std::array<uint32_t, 4>& c,
                                              const std::array<uint32_t, 2>& k) {
        const uint64_t p0 = 0xD2511F53ull * c[0];
        const uint64_t p1 = 0xCD9E8D57ull * c[2];
        return {static_cast<uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
                static_cast<uint32_t>(p1),
                static_cast<uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
                static_cast<uint32_t>(p0)};
    }

    static void bump_key(std::array<uint32_t, 2>& k) {
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
    }

    // Two consecutive counter blocks per refill; their round chains are
    // independent and pipeline through the multiplier. The output stream is
    // the plain block(ctr), block(ctr+1), ... concatenation.
    void refill() {
        std::array<uint32_t, 4> c0 = ctr_;
        bump_ctr();
        std::array<uint32_t, 4> c1 = ctr_;
        bump_ctr();
        std::array<uint32_t, 2> k = key_;
        for (int round = 0; round < 10; ++round) {
            c0 = round_once(c0, k);
            c1 = round_once(c1, k);
            bump_key(k);
        }
        for (int i = 0; i < 4; ++i) {
            buf_[i] = c0[i];
            buf_[4 + i] = c1[i];
        }
        pos_ = 0;
    }

    void bump_ctr() {
        if (++ctr_[0] == 0) ++ctr_[1];
    }

    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> ctr_;
    std::array<uint32_t, 8> buf_{};
    int pos_ = 8;
};

} // namespace qperc
