#ifndef RISOP_RNG_HPP
#define RISOP_RNG_HPP

#include <array>
#include <cstdint>

namespace risop {

/// Philox-4x32-10 counter-based generator.
///
/// A (seed, stream) pair selects an independent substream; the position inside
/// a substream is a plain 64-bit block counter.  Output for a given
/// (seed, stream, block) never depends on how many other streams exist or in
/// which order they are consumed, which is what makes chunked Monte Carlo
/// reproducible under any worker count.
class Philox4x32 {
public:
    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    void set_block(std::uint64_t block) {
        block_ = block;
        buf_pos_ = 4;
    }

    std::uint32_t next_u32() {
        if (buf_pos_ >= 4) refill();
        return buf_[buf_pos_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t lo = next_u32();
        std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform on the open interval (0, 1); never returns an exact endpoint,
    /// so -log(u) and log(1-u) are always finite.
    double next_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static void round(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
        std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    }

    void refill() {
        std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(block_),
                                            static_cast<std::uint32_t>(block_ >> 32),
                                            stream_lo_, stream_hi_};
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int r = 0; r < 10; ++r) {
            round(ctr, k0, k1);
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        buf_ = ctr;
        buf_pos_ = 0;
        ++block_;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int buf_pos_ = 4;
};

} // namespace risop

#endif
