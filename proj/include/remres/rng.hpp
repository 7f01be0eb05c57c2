#ifndef REMRES_RNG_HPP
#define REMRES_RNG_HPP

#include <cstdint>
#include <cstring>
#include <random>
#include <string_view>
#include <vector>

namespace remres::rng {

using Engine = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits of the raw stream.
// Avoids std::uniform_real_distribution, whose output is not pinned by the
// standard; the raw mt19937_64 sequence is.
inline double uniform01(Engine& eng)
{
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), rejection sampled to avoid modulo bias.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t n)
{
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = eng();
        if (r >= threshold)
            return r % n;
    }
}

// Fisher-Yates shuffle driven by uniform_below, so the permutation depends
// only on the engine state (std::shuffle is implementation-defined).
template <typename T>
void shuffle(std::vector<T>& v, Engine& eng)
{
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(eng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// 64-bit FNV-1a over a canonical byte encoding. Used to derive per-replicate
// seeds from cell coordinates; must stay stable across runs and platforms.
class StableHash {
public:
    StableHash& mix_bytes(const void* data, std::size_t len)
    {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
        return *this;
    }

    StableHash& mix(std::uint64_t v)
    {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i)
            b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
        return mix_bytes(b, 8);
    }

    StableHash& mix(double v)
    {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        return mix(bits);
    }

    StableHash& mix(std::string_view s)
    {
        mix_bytes(s.data(), s.size());
        return mix(static_cast<std::uint64_t>(s.size()));
    }

    std::uint64_t value() const { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

} // namespace remres::rng

#endif
