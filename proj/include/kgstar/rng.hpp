#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace kgstar {

/// Deterministic uniform generator: the mapping from engine output to
/// doubles is spelled out here so seeded runs reproduce across standard
/// libraries (distribution classes leave that unspecified).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        const double u = std::ldexp(static_cast<double>(gen_() >> 11), -53);
        return lo + (hi - lo) * u;
    }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
};

} // namespace kgstar
