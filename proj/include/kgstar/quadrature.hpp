#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace kgstar::quad {

// 16-point Gauss-Legendre rule on [-1, 1]: positive abscissae and weights.
inline constexpr std::array<double, 8> gl16_abscissa = {
    0.09501250983763744019, 0.28160355077925891323, 0.45801677765722738634,
    0.61787624440264374845, 0.75540440835500303390, 0.86563120238783174388,
    0.94457502307323257608, 0.98940093499164993260};
inline constexpr std::array<double, 8> gl16_weight = {
    0.18945061045506849629, 0.18260341504492358887, 0.16915651939500253819,
    0.14959598881657673208, 0.12462897125553387205, 0.09515851168249278481,
    0.06225352393864789286, 0.02715245941175409485};

/// Integrates f over a single panel [lo, hi] with the 16-node rule.
template <class F>
auto gauss16(F&& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    using R = decltype(f(mid));
    R sum{};
    for (std::size_t i = 0; i < 8; ++i) {
        const double d = half * gl16_abscissa[i];
        sum += gl16_weight[i] * (f(mid - d) + f(mid + d));
    }
    return sum * half;
}

/// n+1 uniform breakpoints over [lo, hi].
inline std::vector<double> uniform_breaks(double lo, double hi, int n) {
    std::vector<double> b(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        b[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / n;
    b.front() = lo;
    b.back() = hi;
    return b;
}

/**
 * Refines the breakpoint list geometrically toward `edge` (which must be
 * the first or last breakpoint): the adjacent panel is split into `levels`
 * sub-panels with widths halving toward the edge, stopping at `min_width`.
 * Used next to square-root kinks of spectral weights at band thresholds.
 */
inline void grade_toward(std::vector<double>& breaks, double edge, int levels, double min_width) {
    const bool at_front = edge == breaks.front();
    const double inner = at_front ? breaks[1] : breaks[breaks.size() - 2];
    double w = std::abs(inner - edge);
    std::vector<double> extra;
    for (int l = 0; l < levels; ++l) {
        w *= 0.5;
        if (w < min_width) break;
        extra.push_back(at_front ? edge + w : edge - w);
    }
    breaks.insert(at_front ? breaks.begin() + 1 : breaks.end() - 1, extra.begin(), extra.end());
    std::sort(breaks.begin(), breaks.end());
}

/// Materialized composite rule: all node coordinates with their weights.
struct NodeSet {
    std::vector<double> x;
    std::vector<double> w;

    [[nodiscard]] std::size_t size() const { return x.size(); }
};

inline NodeSet gl16_nodes(const std::vector<double>& breaks) {
    NodeSet ns;
    ns.x.reserve((breaks.size() - 1) * 16);
    ns.w.reserve((breaks.size() - 1) * 16);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
        const double half = 0.5 * (breaks[p + 1] - breaks[p]);
        for (std::size_t i = 0; i < 8; ++i) {
            const double d = half * gl16_abscissa[i];
            ns.x.push_back(mid - d);
            ns.w.push_back(gl16_weight[i] * half);
            ns.x.push_back(mid + d);
            ns.w.push_back(gl16_weight[i] * half);
        }
    }
    return ns;
}

template <class F>
auto integrate(F&& f, const std::vector<double>& breaks) {
    using R = decltype(f(breaks.front()));
    R sum{};
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p)
        sum += gauss16(f, breaks[p], breaks[p + 1]);
    return sum;
}

} // namespace kgstar::quad
