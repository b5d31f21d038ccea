#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "kgstar/errors.hpp"
#include "kgstar/network.hpp"

namespace kgstar {

/**
 * Normalized oscillation phase on observation branch r,
 *
 *   φ(p, τ, χ) = √(a_r + c_r p²) τ - p χ,
 *
 * where (τ, χ) = (t, x)/ω and ω = √(t² + x²).  The full phase of the
 * wave integrand is ω·φ, and the same expression evaluated at (t, x)
 * instead of (τ, χ) recovers it, since φ is linear in (τ, χ).
 */
inline double phase(const StarNetwork& net, int r, double p, double tau, double chi) {
    return std::sqrt(net.potential(r) + net.speed(r) * p * p) * tau - p * chi;
}

/// φ and its first four p-derivatives in closed form.
struct PhaseDerivs {
    double phi = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
    double d4 = 0.0;
};

inline PhaseDerivs phase_derivs(const StarNetwork& net, int r, double p, double tau,
                                double chi) {
    const double a = net.potential(r);
    const double c = net.speed(r);
    const double s2 = a + c * p * p;
    const double s = std::sqrt(s2);
    PhaseDerivs d;
    d.phi = s * tau - p * chi;
    d.d1 = c * p / s * tau - chi;
    d.d2 = tau * c * a / (s2 * s);
    d.d3 = -3.0 * a * c * c * p / (s2 * s2 * s) * tau;
    d.d4 = -3.0 * a * c * c * (a - 4.0 * p * p * c) / (s2 * s2 * s2 * s) * tau;
    return d;
}

/**
 * The unique positive zero of ∂φ/∂p for c_r t² > x²:
 * p₀ = √(a_r x² / (c_r (c_r t² - x²))).  Outside the light cone the
 * derivative has no real zero.
 */
inline double stationary_point(const StarNetwork& net, int r, double t, double x) {
    const double a = net.potential(r);
    const double c = net.speed(r);
    const double disc = c * t * t - x * x;
    if (!(disc > 0.0))
        throw OutsideLightCone("c_r t^2 <= x^2 at t = " + std::to_string(t) +
                               ", x = " + std::to_string(x));
    return std::sqrt(a * x * x / (c * disc));
}

/**
 * Space-time cone of t^{-1/2} decay for spectral support [λ_min, λ_max]
 * on branch r: slopes t/x between the reciprocal group velocities at the
 * support edges; equivalently v(t,x) = c_r (t/x)² - 1 ∈ [v_min, v_max].
 * Boundary points count as outside (interior stationary point required).
 */
struct Cone {
    int r = 0;
    double c_r = 0.0;
    double a_r = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double slope_min = 0.0;
    double slope_max = 0.0;
    double v_min = 0.0;
    double v_max = 0.0;

    [[nodiscard]] double v_of(double t, double x) const {
        return c_r * (t / x) * (t / x) - 1.0;
    }

    [[nodiscard]] bool contains_v(double v) const { return v_min < v && v < v_max; }
    [[nodiscard]] bool contains_slope(double s) const { return slope_min < s && s < slope_max; }
    [[nodiscard]] bool contains(double t, double x) const {
        return x > 0.0 && t > 0.0 && contains_v(v_of(t, x));
    }

    /// Ray through the middle of the cone in the v parametrization.
    [[nodiscard]] double center_slope() const {
        return std::sqrt((0.5 * (v_min + v_max) + 1.0) / c_r);
    }

    /// x/t aperture bounds, reciprocal to the slope bounds.
    [[nodiscard]] double xt_lo() const { return 1.0 / slope_max; }
    [[nodiscard]] double xt_hi() const { return 1.0 / slope_min; }
    [[nodiscard]] double aperture() const { return xt_hi() - xt_lo(); }
};

inline Cone cone(const StarNetwork& net, int r, double lambda_min, double lambda_max) {
    if (r < 1 || r > net.size())
        throw BandViolation("branch r = " + std::to_string(r) + " out of range");
    const double a = net.potential(r);
    const double c = net.speed(r);
    if (!(a < lambda_min && lambda_min < lambda_max))
        throw BandViolation("need a_r < lambda_min < lambda_max");
    Cone co;
    co.r = r;
    co.c_r = c;
    co.a_r = a;
    co.lambda_min = lambda_min;
    co.lambda_max = lambda_max;
    co.slope_min = std::sqrt(lambda_max / (c * (lambda_max - a)));
    co.slope_max = std::sqrt(lambda_min / (c * (lambda_min - a)));
    co.v_min = a / (lambda_max - a);
    co.v_max = a / (lambda_min - a);
    return co;
}

/**
 * Evaluation point (t, x) on branch r with the derived phase-normalization
 * data; p0 is present exactly when the point lies inside the cone.
 */
struct PhasePoint {
    double t = 0.0;
    double x = 0.0;
    int r = 0;
    double omega = 0.0;
    double tau = 0.0;
    double chi = 0.0;
    double v = 0.0;
    std::optional<double> p0;
};

inline PhasePoint phase_point(const StarNetwork& net, const Cone& co, double t, double x) {
    PhasePoint pp;
    pp.t = t;
    pp.x = x;
    pp.r = co.r;
    pp.omega = std::hypot(t, x);
    pp.tau = pp.omega > 0.0 ? t / pp.omega : 0.0;
    pp.chi = pp.omega > 0.0 ? x / pp.omega : 0.0;
    pp.v = x > 0.0 ? co.v_of(t, x) : 0.0;
    if (co.contains(t, x)) pp.p0 = stationary_point(net, co.r, t, x);
    return pp;
}

} // namespace kgstar
