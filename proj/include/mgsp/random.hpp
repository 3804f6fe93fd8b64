#pragma once

#include <cstdint>
#include <random>

namespace mgsp {

/// Seeded generator with a platform-independent stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so the
/// derived draws below are computed directly from the raw 64-bit words:
///   uniform()   = (word >> 11) * 2^-53, in [0, 1)
///   index(n)    = floor(uniform() * n)
///   normal()    = Box-Muller on two uniform() draws, cosine branch only
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next() { return engine_(); }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t index(std::uint64_t n)
    {
        auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

    double normal();

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

} // namespace mgsp
