#ifndef WLP_RANDOM_HPP
#define WLP_RANDOM_HPP

#include <cstdint>

namespace wlp {

struct Seed {
    std::uint64_t value = 0;
    friend bool operator==(Seed, Seed) = default;
};

/// splitmix64 stream. Unlike the standard distributions, the mapping from
/// seed to values is fixed here, so streams are bit-identical everywhere.
class Rng {
public:
    explicit Rng(Seed seed) noexcept : state_(seed.value) {}
    Rng(Seed seed, std::uint64_t stream) noexcept : state_(seed.value ^ (0x9e3779b97f4a7c15ull * (stream + 1))) {}

    std::uint64_t next() noexcept
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound), by rejection.
    std::uint64_t below(std::uint64_t bound) noexcept
    {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::uint64_t state_;
};

} // namespace wlp

#endif
