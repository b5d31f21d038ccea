#pragma once

#include <limits>
#include <string>
#include <vector>

#include "kgstar/errors.hpp"

namespace kgstar {

/**
 * Star-shaped network of n half-axes glued at the origin.
 *
 * Branch k carries the operator -c_k d²/dx² + a_k on (0, ∞) with
 * 0 < c_k and 0 ≤ a_1 ≤ a_2 ≤ … ≤ a_n.  Branch indices are 1-based
 * throughout the public API.  Immutable after construction; safe to
 * share across threads.
 */
struct StarNetwork {
    std::vector<double> c;  // propagation coefficients, c[k-1] > 0
    std::vector<double> a;  // potentials, non-decreasing, a[0] >= 0

    [[nodiscard]] int size() const { return static_cast<int>(c.size()); }

    [[nodiscard]] double speed(int k) const { return c[static_cast<std::size_t>(k - 1)]; }
    [[nodiscard]] double potential(int k) const { return a[static_cast<std::size_t>(k - 1)]; }
};

/**
 * Spectral band number j: energy interval [a_j, a_{j+1}) on which the
 * spectral multiplicity equals j, with the convention a_{n+1} = +∞.
 * Adjacent equal potentials make a band degenerate (lo == hi).
 */
struct SpectralBand {
    int j = 0;
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool degenerate() const { return !(lo < hi); }
    [[nodiscard]] bool unbounded() const { return hi == std::numeric_limits<double>::infinity(); }
};

/// Validates branch data and returns the network. Validation is idempotent.
inline StarNetwork validate_network(std::vector<double> c, std::vector<double> a) {
    if (c.size() != a.size())
        throw BranchCountTooSmall("coefficient lists differ in length: " +
                                  std::to_string(c.size()) + " vs " + std::to_string(a.size()));
    if (c.size() < 2)
        throw BranchCountTooSmall("need at least 2 branches, got " + std::to_string(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!(c[i] > 0.0))
            throw NonPositiveSpeed("c[" + std::to_string(i + 1) + "] = " + std::to_string(c[i]));
    }
    if (a.front() < 0.0)
        throw NegativePotential("a[1] = " + std::to_string(a.front()));
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (a[i] < a[i - 1])
            throw UnsortedPotentials("a[" + std::to_string(i + 1) + "] < a[" + std::to_string(i) + "]");
    }
    return StarNetwork{std::move(c), std::move(a)};
}

/// Band j = 1…n of the network; bands partition [a_1, ∞).
inline SpectralBand band(const StarNetwork& net, int j) {
    if (j < 1 || j > net.size())
        throw BandIndexOutOfRange("j = " + std::to_string(j) + ", n = " + std::to_string(net.size()));
    const double hi = (j == net.size()) ? std::numeric_limits<double>::infinity()
                                        : net.potential(j + 1);
    return SpectralBand{j, net.potential(j), hi};
}

} // namespace kgstar
