#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "kgstar/errors.hpp"
#include "kgstar/fit.hpp"
#include "kgstar/initial_data.hpp"
#include "kgstar/network.hpp"
#include "kgstar/parallel.hpp"
#include "kgstar/phase.hpp"
#include "kgstar/propagator.hpp"
#include "kgstar/spectral.hpp"

namespace kgstar {

/**
 * Normalization of the t^{-1/2} leading coefficient.
 *
 *   bound_form   — the closed-form normalization the coefficient bounds
 *                  majorize: prefactor (2iπ)^{1/2} a_r^{3/4} c_r^{1/4} c_k^{1/2}
 *                  with phase e^{-i Φ₀}.
 *   matched_form — the normalization reproducing the large-t leading term
 *                  of u₊ itself: 2 c_r^{1/2} π^{-1/2} times the bound_form
 *                  modulus (the π^{-1/2} is u₊'s synthesis normalization),
 *                  with the conjugate phase e^{+i Φ₀}.
 *
 * Here Φ₀ = √λ*·t - p₀·x is the full phase at the stationary point.
 * Remainder tables use matched_form, bound-compliance checks use
 * bound_form.
 */
enum class LeadingTermConvention { bound_form, matched_form };

struct AsymptoticTerm {
    Complex H;
    double h1 = 0.0;
    double h2 = 0.0;
    double p0 = 0.0;
    double lambda_star = 0.0;
    double phase_at_p0 = 0.0;
};

namespace detail {

/// h2 numerator/denominator at a given v; sub-threshold summands go
/// imaginary through the branch square root and contribute to |Σ|².
inline double h2_of_v(const StarNetwork& net, int r, int k, double v) {
    const double a_r = net.potential(r);
    Complex den{0.0, 0.0};
    for (int l = 1; l <= net.size(); ++l)
        den += std::sqrt(net.speed(l)) *
               branch_sqrt(Complex{(a_r - net.potential(l)) * v + a_r, 0.0});
    const double num = std::sqrt((a_r - net.potential(k)) * v + a_r);
    return num / std::norm(den);
}

inline double h1_of_v(double c_r, double v) {
    const double tx2 = (v + 1.0) / c_r;
    return std::pow(tx2 / v, 0.75);
}

/// |H| in bound_form along the ray with cone coordinate v (t-independent).
inline double abs_H_on_ray(const StarNetwork& net, const SpectralProfile& prof, int r,
                           double v) {
    const double a_r = net.potential(r);
    const double c_r = net.speed(r);
    const double lambda_star = a_r * (v + 1.0) / v;
    const double psi = prof.psi.value(lambda_star);
    return std::sqrt(2.0 * std::acos(-1.0)) * std::pow(a_r, 0.75) * std::pow(c_r, 0.25) *
           std::sqrt(net.speed(prof.k)) * h1_of_v(c_r, v) * h2_of_v(net, r, prof.k, v) * psi;
}

} // namespace detail

/**
 * Leading coefficient H(t, x, u₀) of the t^{-1/2} term of u₊, together
 * with its factors.  Only defined strictly inside the decay cone (the
 * stationary point must be interior to the spectral support).
 */
inline AsymptoticTerm leading_coefficient(const StarNetwork& net, const SpectralProfile& prof,
                                          int r, double t, double x,
                                          LeadingTermConvention conv =
                                              LeadingTermConvention::bound_form) {
    detail::check_observation_branch(net, prof, r);
    const Cone co = cone(net, r, prof.lambda_min, prof.lambda_max);
    if (!co.contains(t, x))
        throw OutsideCone("(t, x) = (" + std::to_string(t) + ", " + std::to_string(x) +
                          ") not strictly inside the decay cone");
    const double a_r = co.a_r;
    const double c_r = co.c_r;
    const double v = co.v_of(t, x);

    AsymptoticTerm term;
    term.p0 = stationary_point(net, r, t, x);
    term.lambda_star = a_r + c_r * term.p0 * term.p0;
    term.h1 = detail::h1_of_v(c_r, v);
    term.h2 = detail::h2_of_v(net, r, prof.k, v);
    term.phase_at_p0 = std::sqrt(term.lambda_star) * t - term.p0 * x;

    const double pi = std::acos(-1.0);
    const double base = std::sqrt(2.0 * pi) * std::pow(a_r, 0.75) *
                        std::sqrt(net.speed(prof.k)) * term.h1 * term.h2 *
                        prof.psi.value(term.lambda_star);
    if (conv == LeadingTermConvention::bound_form) {
        term.H = std::polar(base * std::pow(c_r, 0.25), 0.25 * pi - term.phase_at_p0);
    } else {
        term.H = std::polar(transform_norm * 2.0 * base * std::pow(c_r, 0.75),
                            0.25 * pi + term.phase_at_p0);
    }
    return term;
}

/**
 * Closed-form sup bound for |H| (bound_form) over the whole cone:
 * (2π c_k / c_r)^{1/2} λ_max^{3/4} · max_v √(|(a_r - a_k)v + a_r|) /
 * (Σ_{l≤r} √c_l √((a_r - a_l)v_min + a_r))² · sup|ψ|.  The v-maximum is
 * taken by dense sampling plus the endpoints; monotonicity is not assumed.
 */
inline double coefficient_sup_bound(const StarNetwork& net, const SpectralProfile& prof, int r,
                                    int v_samples = 1024) {
    detail::check_observation_branch(net, prof, r);
    const Cone co = cone(net, r, prof.lambda_min, prof.lambda_max);
    if (!(co.v_min > 0.0))
        throw ParameterViolation("a_r = 0 gives an empty decay cone");
    const double a_r = co.a_r;

    double max_num = 0.0;
    for (int i = 0; i <= v_samples; ++i) {
        const double v = co.v_min + (co.v_max - co.v_min) * static_cast<double>(i) / v_samples;
        max_num = std::max(max_num, std::sqrt(std::abs((a_r - net.potential(prof.k)) * v + a_r)));
    }
    double den = 0.0;
    for (int l = 1; l <= r; ++l)
        den += std::sqrt(net.speed(l)) * std::sqrt((a_r - net.potential(l)) * co.v_min + a_r);
    const double pi = std::acos(-1.0);
    return std::sqrt(2.0 * pi * net.speed(prof.k) / net.speed(r)) *
           std::pow(co.lambda_max, 0.75) * max_num / (den * den) * prof.psi.sup_norm();
}

/// Two-branch closed-form bound √(2π)·√β (a₂+β)^{3/4} / (√a₂ √(a₂-a₁+β)).
inline double coefficient_bound_two_branch(double a1, double a2, double alpha, double beta) {
    if (!(0.0 < alpha && alpha < beta && beta < 1.0))
        throw ParameterViolation("need 0 < alpha < beta < 1");
    if (!(a1 <= a2) || !(a2 > 0.0))
        throw ParameterViolation("need a1 <= a2 and a2 > 0");
    const double pi = std::acos(-1.0);
    return std::sqrt(2.0 * pi) * std::sqrt(beta) * std::pow(a2 + beta, 0.75) /
           (std::sqrt(a2) * std::sqrt(a2 - a1 + beta));
}

/**
 * Two-branch potential-step sweep (c₁ = c₂ = 1, component 1 observed on
 * branch 2): per step height a₂, the cone geometry, the ray-sampled
 * maximum of |H| (bound_form), the closed-form bound, and |u₊| measured
 * on the cone-center ray at the reference times.
 */
struct StepSweepRow {
    double a2 = 0.0;
    double slope_min = 0.0;
    double slope_max = 0.0;
    double xt_lo = 0.0;
    double xt_hi = 0.0;
    double aperture = 0.0;
    double max_abs_H = 0.0;
    double bound = 0.0;
    double fitted_slope_running = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> abs_u_ref;
};

inline std::vector<StepSweepRow> step_sweep(double a1, const std::vector<double>& a2_grid,
                                            double alpha, double beta, int rays_per_cone,
                                            const std::vector<double>& t_list,
                                            const QuadOptions& opts = {}, int threads = 1) {
    for (std::size_t i = 1; i < a2_grid.size(); ++i)
        if (!(a2_grid[i] > a2_grid[i - 1]))
            throw ParameterViolation("a2 grid must be strictly increasing");
    std::vector<StepSweepRow> rows(a2_grid.size());
    parallel_for(a2_grid.size(), threads, [&](std::size_t idx) {
        const double a2 = a2_grid[idx];
        const StarNetwork net = validate_network({1.0, 1.0}, {a1, a2});
        const SpectralProfile prof = make_profile(net, 2, 1, band_bump(a2 + alpha, a2 + beta));
        const int r = 2;
        const Cone co = cone(net, r, prof.lambda_min, prof.lambda_max);

        StepSweepRow row;
        row.a2 = a2;
        row.slope_min = std::sqrt((a2 + beta) / beta);
        row.slope_max = std::sqrt((a2 + alpha) / alpha);
        row.xt_lo = std::sqrt(alpha / (a2 + alpha));
        row.xt_hi = std::sqrt(beta / (a2 + beta));
        row.aperture = row.xt_hi - row.xt_lo;
        for (int i = 0; i < rays_per_cone; ++i) {
            const double v = co.v_min + (co.v_max - co.v_min) * (i + 0.5) / rays_per_cone;
            row.max_abs_H = std::max(row.max_abs_H, detail::abs_H_on_ray(net, prof, r, v));
        }
        row.bound = coefficient_bound_two_branch(a1, a2, alpha, beta);
        const double slope = co.center_slope();
        for (const double t : t_list)
            row.abs_u_ref.push_back(std::abs(u_plus(net, prof, r, t, t / slope, Form::p_form, opts)));
        rows[idx] = std::move(row);
    });

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        xs.push_back(rows[i].a2);
        ys.push_back(rows[i].max_abs_H);
        if (i >= 1) rows[i].fitted_slope_running = loglog_fit(xs, ys).slope;
    }
    return rows;
}

} // namespace kgstar
