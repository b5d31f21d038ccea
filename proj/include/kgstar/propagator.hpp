#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "kgstar/errors.hpp"
#include "kgstar/initial_data.hpp"
#include "kgstar/network.hpp"
#include "kgstar/phase.hpp"
#include "kgstar/quadrature.hpp"
#include "kgstar/spectral.hpp"

namespace kgstar {

/// Oscillatory integral ∫_K U(p) e^{i ω Ψ(p)} dp with smooth amplitude
/// and real phase on the compact interval K = [p_min, p_max].
struct OscillatoryIntegrand {
    std::function<Complex(double)> amplitude;
    std::function<double(double)> phase;
    double omega = 0.0;
    double p_min = 0.0;
    double p_max = 0.0;
};

struct QuadOptions {
    int min_panels = 64;       // resolves the amplitude even without oscillation
    long panel_cap = 200000;   // oscillation budget
    int tv_samples = 512;      // phase total-variation probe
    int refine = 1;            // multiplies the chosen panel count (stability checks)
};

/**
 * Oscillation-resolving composite quadrature: uniform panels sized so the
 * accumulated phase per panel stays below π/2 (probed by sampling the
 * phase), 16 Gauss-Legendre nodes per panel.
 */
inline Complex oscillatory_quad(const OscillatoryIntegrand& in, const QuadOptions& opts = {}) {
    const double len = in.p_max - in.p_min;
    if (!(len > 0.0)) throw ParameterViolation("empty integration interval");

    double tv = 0.0;
    double prev = in.phase(in.p_min);
    for (int i = 1; i <= opts.tv_samples; ++i) {
        const double p = in.p_min + len * static_cast<double>(i) / opts.tv_samples;
        const double cur = in.phase(p);
        tv += std::abs(cur - prev);
        prev = cur;
    }
    const double pi = std::acos(-1.0);
    const double need = std::ceil(in.omega * tv / (0.5 * pi));
    if (need > static_cast<double>(opts.panel_cap))
        throw BudgetExceeded(std::to_string(static_cast<long long>(need)) + " panels needed, cap " +
                             std::to_string(opts.panel_cap));
    const int panels = std::max(opts.min_panels, static_cast<int>(need)) * std::max(1, opts.refine);

    const auto f = [&](double p) {
        return in.amplitude(p) * std::exp(Complex{0.0, in.omega * in.phase(p)});
    };
    return quad::integrate(f, quad::uniform_breaks(in.p_min, in.p_max, panels));
}

enum class Form { p_form, lambda_form };

namespace detail {

inline void check_observation_branch(const StarNetwork& net, const SpectralProfile& prof, int r) {
    if (r < 1 || r > net.size())
        throw BranchHypothesisViolated("branch r = " + std::to_string(r) + " out of range");
    if (r > prof.j)
        throw BranchHypothesisViolated("r = " + std::to_string(r) + " > j = " + std::to_string(prof.j));
    if (r == prof.k)
        throw BranchHypothesisViolated("r = k = " + std::to_string(r));
}

/// Half-wave component with time-phase sign ±1.  The p-substituted form
/// carries phase ω·φ(p, τ, χ); the λ-form keeps the raw spectral integral
/// and serves as an independent cross-check of the same quantity.  Both
/// kernels carry the synthesis normalization π^{-1/2}, matching inverse().
inline Complex half_wave(const StarNetwork& net, const SpectralProfile& prof, int r,
                         double t, double x, double time_sign, Form form,
                         const QuadOptions& opts) {
    check_observation_branch(net, prof, r);
    const int k = prof.k;
    const double a_r = net.potential(r);
    const double c_r = net.speed(r);

    if (form == Form::lambda_form) {
        OscillatoryIntegrand in;
        in.omega = 1.0;
        in.p_min = prof.lambda_min;
        in.p_max = prof.lambda_max;
        in.amplitude = [&net, &prof, k](double lam) {
            return Complex{transform_norm * spectral_weight(net, k, lam) * prof.psi.value(lam),
                           0.0};
        };
        in.phase = [&net, r, t, x, time_sign](double lam) {
            const double xr = wavenumber(net, r, lam).real();
            return time_sign * std::sqrt(lam) * t - xr * x;
        };
        return oscillatory_quad(in, opts);
    }

    OscillatoryIntegrand in;
    in.p_min = wavenumber(net, r, prof.lambda_min).real();
    in.p_max = wavenumber(net, r, prof.lambda_max).real();
    in.omega = std::hypot(t, x);
    in.amplitude = [&net, &prof, k, a_r, c_r](double p) {
        const double lam = a_r + c_r * p * p;
        return Complex{
            transform_norm * 2.0 * c_r * spectral_weight(net, k, lam) * prof.psi.value(lam) * p,
            0.0};
    };
    if (in.omega == 0.0) {
        in.phase = [](double) { return 0.0; };
    } else {
        const double tau = t / in.omega;
        const double chi = x / in.omega;
        // the + sign is φ(p, τ, χ) itself; the - sign folds into it as
        // -φ(p, τ, -χ), so both half waves share the analyzed phase code
        in.phase = [&net, r, tau, chi, time_sign](double p) {
            return time_sign > 0.0 ? phase(net, r, p, tau, chi)
                                   : -phase(net, r, p, tau, -chi);
        };
    }
    return oscillatory_quad(in, opts);
}

} // namespace detail

inline Complex u_plus(const StarNetwork& net, const SpectralProfile& prof, int r, double t,
                      double x, Form form = Form::p_form, const QuadOptions& opts = {}) {
    return detail::half_wave(net, prof, r, t, x, +1.0, form, opts);
}

inline Complex u_minus(const StarNetwork& net, const SpectralProfile& prof, int r, double t,
                       double x, Form form = Form::p_form, const QuadOptions& opts = {}) {
    return detail::half_wave(net, prof, r, t, x, -1.0, form, opts);
}

/// Field value u = (u₊ + u₋)/2 with both half waves retained.
struct FieldSample {
    double t = 0.0;
    double x = 0.0;
    int r = 0;
    Complex value_plus;
    Complex value_minus;
    Complex value;
};

inline FieldSample solution(const StarNetwork& net, const SpectralProfile& prof, int r,
                            double t, double x, Form form = Form::p_form,
                            const QuadOptions& opts = {}) {
    FieldSample fs;
    fs.t = t;
    fs.x = x;
    fs.r = r;
    fs.value_plus = u_plus(net, prof, r, t, x, form, opts);
    fs.value_minus = u_minus(net, prof, r, t, x, form, opts);
    fs.value = 0.5 * (fs.value_plus + fs.value_minus);
    return fs;
}

} // namespace kgstar
