#pragma once

#include <cstdint>
#include <random>

namespace rvc {

// Deterministic uniform stream. The 53-bit conversion is done by hand so the
// same seed yields the same variates on every standard library; values lie
// strictly inside (0, 1).
class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : gen_(seed) {}

    double next() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

} // namespace rvc
