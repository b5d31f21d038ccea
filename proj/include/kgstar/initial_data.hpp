#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "kgstar/errors.hpp"
#include "kgstar/network.hpp"
#include "kgstar/spectral.hpp"
#include "kgstar/transform.hpp"

namespace kgstar {

/**
 * Compactly supported C² bump ψ(λ) = N·((λ-α)(β-λ))^order on (α, β),
 * zero outside, with N chosen so that sup ψ = 1 (attained at the
 * midpoint).  order = 3 is the minimal choice giving exactly C² with
 * compact support; higher orders are smoother.
 */
struct BandBump {
    double alpha = 0.0;
    double beta = 0.0;
    int order = 3;
    double normalization = 0.0;

    [[nodiscard]] bool inside(double lam) const { return lam > alpha && lam < beta; }

    [[nodiscard]] double value(double lam) const {
        if (!inside(lam)) return 0.0;
        return normalization * std::pow((lam - alpha) * (beta - lam), order);
    }

    [[nodiscard]] double d1(double lam) const {
        if (!inside(lam)) return 0.0;
        const double u = lam - alpha, v = beta - lam;
        return normalization * order * std::pow(u * v, order - 1) * (v - u);
    }

    [[nodiscard]] double d2(double lam) const {
        if (!inside(lam)) return 0.0;
        const double u = lam - alpha, v = beta - lam;
        const double q = order;
        return normalization * (q * (q - 1.0) * std::pow(u * v, order - 2) * (v - u) * (v - u) -
                                2.0 * q * std::pow(u * v, order - 1));
    }

    /// Exact by the closed-form normalization.
    [[nodiscard]] double sup_norm() const { return 1.0; }
};

inline BandBump band_bump(double alpha, double beta, int order = 3) {
    if (!(alpha < beta))
        throw EmptyInterval("[" + std::to_string(alpha) + ", " + std::to_string(beta) + "]");
    if (order < 3) throw ParameterViolation("bump order must be >= 3");
    BandBump b;
    b.alpha = alpha;
    b.beta = beta;
    b.order = order;
    b.normalization = std::pow(0.5 * (beta - alpha), -2.0 * order);
    return b;
}

/**
 * Spectral initial datum: (Vu₀)_k = ψ supported strictly inside band j,
 * all other components identically zero, and zero initial velocity.
 * Requires k ≤ j; the support keeps the guard distance from both band
 * edges.
 */
struct SpectralProfile {
    int j = 0;
    int k = 0;
    BandBump psi;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

inline SpectralProfile make_profile(const StarNetwork& net, int j, int k, const BandBump& psi) {
    if (k < 1 || k > net.size() || j < 1 || j > net.size())
        throw BandIndexOutOfRange("j = " + std::to_string(j) + ", k = " + std::to_string(k));
    if (k > j)
        throw ComponentIndexTooLarge("k = " + std::to_string(k) + " > j = " + std::to_string(j));
    const SpectralBand b = band(net, j);
    if (b.degenerate())
        throw BumpOutsideBand("band " + std::to_string(j) + " is degenerate");
    if (!(psi.alpha > b.lo + threshold_guard))
        throw BumpOutsideBand("support reaches the lower band edge");
    if (!b.unbounded() && !(psi.beta < b.hi - threshold_guard))
        throw BumpOutsideBand("support reaches the upper band edge");
    return SpectralProfile{j, k, psi, psi.alpha, psi.beta};
}

/// ψ evaluated as the k-th transform component; zero for other components.
inline Complex profile_component(const SpectralProfile& p, int l, double lambda) {
    if (l != p.k) return {0.0, 0.0};
    return {p.psi.value(lambda), 0.0};
}

/// Materializes the profile on a Gauss-Legendre grid over its support.
inline SpectralVector profile_vector(const StarNetwork& net, const SpectralProfile& p,
                                     int panels = 64) {
    SpectralVector g;
    g.comp.resize(static_cast<std::size_t>(net.size()));
    const auto ns = quad::gl16_nodes(quad::uniform_breaks(p.lambda_min, p.lambda_max, panels));
    auto& comp = g.comp[static_cast<std::size_t>(p.k - 1)];
    comp.lambda = ns.x;
    comp.w = ns.w;
    comp.value.resize(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i)
        comp.value[i] = Complex{p.psi.value(ns.x[i]), 0.0};
    return g;
}

/**
 * Position-space initial value u₀ on branch m, synthesized through the
 * inverse transform.  The panel count tracks the x-oscillation of the
 * eigenfunctions so pointwise evaluation needs no spatial truncation.
 */
inline Complex realize_u0(const StarNetwork& net, const SpectralProfile& p, int m, double x) {
    const double dxi = std::abs(wavenumber(net, m, p.lambda_max) - wavenumber(net, m, p.lambda_min));
    const double pi = std::acos(-1.0);
    const int panels =
        std::max(64, static_cast<int>(std::ceil(dxi * std::abs(x) / (0.25 * pi))));
    return inverse(net, profile_vector(net, p, panels), m, x);
}

} // namespace kgstar
