#pragma once

#include <cstdint>
#include <string_view>

namespace m3s {

// splitmix64: tiny, fast, and bit-identical on every platform, which the
// deterministic-report requirement needs (std::uniform_real_distribution is
// not portable across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [-1, 1)
    double sym() { return 2.0 * unit() - 1.0; }

private:
    std::uint64_t state_;
};

// Deterministic sub-seed derivation: FNV-1a over a tag string folded into the
// master seed plus an index.  Every sampler in the suite seeds through this so
// results do not depend on check execution order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag, std::uint64_t k = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    h ^= seed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= k * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
    return h;
}

} // namespace m3s
