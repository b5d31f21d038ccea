#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <utility>
#include <vector>

#include "kgstar/errors.hpp"
#include "kgstar/network.hpp"
#include "kgstar/parallel.hpp"
#include "kgstar/quadrature.hpp"
#include "kgstar/spectral.hpp"

namespace kgstar {

/**
 * Position-space function on the truncated network: one callable per
 * branch on [0, x_max], plus optional analytic second derivatives for
 * the diagonalization checks.  `step` is the uniform sampling step used
 * only for serialization; quadratures evaluate the callables directly.
 */
struct BranchFunction {
    using Fn = std::function<Complex(double)>;

    std::vector<Fn> f;
    std::vector<Fn> d2;  // empty when analytic second derivatives are absent
    double x_max = 0.0;
    double step = 0.0;

    [[nodiscard]] int size() const { return static_cast<int>(f.size()); }
    [[nodiscard]] Complex value(int m, double x) const { return f[static_cast<std::size_t>(m - 1)](x); }
    [[nodiscard]] bool has_d2() const { return d2.size() == f.size(); }

    static BranchFunction zero(int n, double x_max, double step) {
        BranchFunction bf;
        bf.f.assign(static_cast<std::size_t>(n), [](double) { return Complex{0.0, 0.0}; });
        bf.d2.assign(static_cast<std::size_t>(n), [](double) { return Complex{0.0, 0.0}; });
        bf.x_max = x_max;
        bf.step = step;
        return bf;
    }
};

/**
 * Spectral-side quadrature layout.  Component k of a transform lives on
 * (a_k, lambda_max]; panels split at every interior threshold and refine
 * geometrically into each threshold, where the weights have square-root
 * kinks.  `refined()` doubles both the spectral and spatial densities.
 */
struct SpectralGrid {
    double lambda_max = 0.0;
    int base_panels = 64;
    int grading_levels = 16;
    double min_panel_width = 1e-5;
    int x_refine = 1;

    [[nodiscard]] SpectralGrid refined() const {
        SpectralGrid g = *this;
        g.base_panels *= 2;
        g.x_refine *= 2;
        return g;
    }
};

/// Sampled spectral vector: per-branch quadrature nodes (λ_i, w_i, g_i).
/// Component k is defined only above its threshold a_k.
struct SpectralVector {
    struct Component {
        std::vector<double> lambda;
        std::vector<double> w;
        std::vector<Complex> value;
    };
    std::vector<Component> comp;

    [[nodiscard]] int size() const { return static_cast<int>(comp.size()); }
};

/// λ-breakpoints for component k on (a_k, grid.lambda_max].
inline std::vector<double> component_breaks(const StarNetwork& net, int k,
                                            const SpectralGrid& grid) {
    const double lo = net.potential(k);
    const double hi = grid.lambda_max;
    if (!(hi > lo + 4.0 * grid.min_panel_width))
        throw ThresholdOnGrid("lambda_max too close to a_" + std::to_string(k));

    std::vector<double> cuts{lo};
    for (int m = 1; m <= net.size(); ++m) {
        const double am = net.potential(m);
        if (am > lo && am < hi && am - cuts.back() > 0.0) cuts.push_back(am);
    }
    cuts.push_back(hi);

    std::vector<double> breaks;
    const double total = hi - lo;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double slo = cuts[s], shi = cuts[s + 1];
        const double len = shi - slo;
        int n = std::max(6, static_cast<int>(std::lround(grid.base_panels * len / total)));
        if (len < 4.0 * grid.min_panel_width) n = 1;
        auto seg = quad::uniform_breaks(slo, shi, n);
        if (len >= 4.0 * grid.min_panel_width) {
            // every cut except lambda_max sits on a threshold
            quad::grade_toward(seg, slo, grid.grading_levels, grid.min_panel_width);
            if (s + 2 < cuts.size())
                quad::grade_toward(seg, shi, grid.grading_levels, grid.min_panel_width);
        }
        if (!breaks.empty()) seg.erase(seg.begin());
        breaks.insert(breaks.end(), seg.begin(), seg.end());
    }
    return breaks;
}

/// Spatial quadrature nodes for branch m: panel width capped by an eighth
/// of the shortest wavelength over the λ-range and by x_max/64.
inline quad::NodeSet branch_nodes(const StarNetwork& net, int m, double x_max,
                                  double lambda_max, int x_refine) {
    const double span = std::max(std::abs(lambda_max - net.potential(m)), net.potential(m));
    const double xi_scale = std::sqrt(std::max(span, 1e-12) / net.speed(m));
    const double pi = std::acos(-1.0);
    const double width = std::min(2.0 * pi / (8.0 * xi_scale), x_max / 64.0) / x_refine;
    const int panels = std::max(1, static_cast<int>(std::ceil(x_max / width)));
    return quad::gl16_nodes(quad::uniform_breaks(0.0, x_max, panels));
}

/**
 * Precomputed forward-transform state for one input function: spatial
 * nodes and the function values on them are shared across all λ.
 */
class ForwardPlan {
public:
    ForwardPlan(const StarNetwork& net, const BranchFunction& fn, double lambda_max,
                int x_refine = 1)
        : net_(&net) {
        nodes_.reserve(static_cast<std::size_t>(net.size()));
        vals_.reserve(static_cast<std::size_t>(net.size()));
        for (int m = 1; m <= net.size(); ++m) {
            nodes_.push_back(branch_nodes(net, m, fn.x_max, lambda_max, x_refine));
            const auto& ns = nodes_.back();
            std::vector<Complex> v(ns.size());
            for (std::size_t i = 0; i < ns.size(); ++i) v[i] = fn.value(m, ns.x[i]);
            vals_.push_back(std::move(v));
        }
    }

    /// (Vf)_k(λ) = π^{-1/2} Σ_m ∫ f_m(x) conj(F_{λ,m}^{-,k}(x)) dx
    [[nodiscard]] Complex eval(int k, double lambda) const {
        const EigenEval ev(*net_, k, Sign::minus, lambda);
        Complex total{0.0, 0.0};
        for (int m = 1; m <= net_->size(); ++m) {
            const auto& ns = nodes_[static_cast<std::size_t>(m - 1)];
            const auto& fv = vals_[static_cast<std::size_t>(m - 1)];
            Complex acc{0.0, 0.0};
            for (std::size_t i = 0; i < ns.size(); ++i)
                acc += ns.w[i] * fv[i] * std::conj(ev.component(m, ns.x[i]));
            total += acc;
        }
        return transform_norm * total;
    }

private:
    const StarNetwork* net_;
    std::vector<quad::NodeSet> nodes_;
    std::vector<std::vector<Complex>> vals_;
};

/// Forward transform of f on the grid's quadrature nodes.
inline SpectralVector forward(const StarNetwork& net, const BranchFunction& fn,
                              const SpectralGrid& grid, int threads = 1) {
    const ForwardPlan plan(net, fn, grid.lambda_max, grid.x_refine);
    SpectralVector out;
    out.comp.resize(static_cast<std::size_t>(net.size()));
    for (int k = 1; k <= net.size(); ++k) {
        auto& comp = out.comp[static_cast<std::size_t>(k - 1)];
        const auto ns = quad::gl16_nodes(component_breaks(net, k, grid));
        comp.lambda = ns.x;
        comp.w = ns.w;
        comp.value.resize(ns.size());
        parallel_for(ns.size(), threads,
                     [&](std::size_t i) { comp.value[i] = plan.eval(k, comp.lambda[i]); });
    }
    return out;
}

/// Single-point forward evaluation (Vf)_k(λ).
inline Complex forward_at(const StarNetwork& net, const BranchFunction& fn, int k,
                          double lambda, double lambda_scale_hint = 0.0) {
    const double hint = lambda_scale_hint > 0.0 ? lambda_scale_hint : lambda;
    return ForwardPlan(net, fn, hint, 1).eval(k, lambda);
}

/// Weighted synthesis (V⁻¹g)_m(x) = π^{-1/2} Σ_k ∫ q_k(λ) g_k(λ) F_{λ,m}^{-,k}(x) dλ.
inline Complex inverse(const StarNetwork& net, const SpectralVector& g, int m, double x) {
    Complex total{0.0, 0.0};
    for (int k = 1; k <= g.size(); ++k) {
        const auto& comp = g.comp[static_cast<std::size_t>(k - 1)];
        for (std::size_t i = 0; i < comp.lambda.size(); ++i) {
            if (comp.value[i] == Complex{0.0, 0.0}) continue;
            const EigenEval ev(net, k, Sign::minus, comp.lambda[i]);
            total += comp.w[i] * spectral_weight(net, k, comp.lambda[i]) * comp.value[i] *
                     ev.component(m, x);
        }
    }
    return transform_norm * total;
}

/// L²_q norm of a spectral vector.
inline double q_norm(const StarNetwork& net, const SpectralVector& g) {
    double acc = 0.0;
    for (int k = 1; k <= g.size(); ++k) {
        const auto& comp = g.comp[static_cast<std::size_t>(k - 1)];
        for (std::size_t i = 0; i < comp.lambda.size(); ++i)
            acc += comp.w[i] * spectral_weight(net, k, comp.lambda[i]) * std::norm(comp.value[i]);
    }
    return std::sqrt(acc);
}

/// Plain L² norm over all branches of the truncated network.
inline double h_norm(const StarNetwork& net, const BranchFunction& fn) {
    double acc = 0.0;
    for (int m = 1; m <= net.size(); ++m) {
        const auto breaks = quad::uniform_breaks(0.0, fn.x_max, 64);
        acc += quad::integrate([&](double x) { return std::norm(fn.value(m, x)); }, breaks);
    }
    return std::sqrt(acc);
}

/// Relative Parseval defect |‖Vf‖_q - ‖f‖_H| / ‖f‖_H (0 for zero input).
inline double isometry_defect(const StarNetwork& net, const BranchFunction& fn,
                              const SpectralGrid& grid, int threads = 1) {
    const double hn = h_norm(net, fn);
    if (hn == 0.0) return 0.0;
    return std::abs(q_norm(net, forward(net, fn, grid, threads)) - hn) / hn;
}

enum class DerivativeMode { analytic, finite_difference };

/**
 * Diagonalization defect max_{k,λ} |(V(Af))_k(λ) - λ (Vf)_k(λ)| for
 * f supported away from the vertex.  With analytic second derivatives the
 * identity holds up to quadrature error; with DerivativeMode::finite_difference
 * the defect is dominated by the O(h²) truncation of the central stencil,
 * which is how second-order convergence is exercised.
 */
inline double diagonalization_defect(const StarNetwork& net, const BranchFunction& fn,
                                     const SpectralGrid& grid,
                                     DerivativeMode mode = DerivativeMode::analytic,
                                     double fd_step = 1e-3, int threads = 1) {
    BranchFunction af;
    af.x_max = fn.x_max;
    af.step = fn.step;
    for (int m = 1; m <= net.size(); ++m) {
        const double cm = net.speed(m);
        const double am = net.potential(m);
        const auto idx = static_cast<std::size_t>(m - 1);
        if (mode == DerivativeMode::analytic) {
            if (!fn.has_d2())
                throw Error("diagonalization_defect: analytic mode requires d2 callables");
            auto fm = fn.f[idx];
            auto dm = fn.d2[idx];
            af.f.push_back([cm, am, fm, dm](double x) { return -cm * dm(x) + am * fm(x); });
        } else {
            auto fm = fn.f[idx];
            const double h = fd_step;
            af.f.push_back([cm, am, fm, h](double x) {
                const Complex d2 = (fm(x + h) - 2.0 * fm(x) + fm(x - h)) / (h * h);
                return -cm * d2 + am * fm(x);
            });
        }
    }
    const auto vf = forward(net, fn, grid, threads);
    const auto vaf = forward(net, af, grid, threads);
    double defect = 0.0;
    for (int k = 1; k <= net.size(); ++k) {
        const auto& a = vaf.comp[static_cast<std::size_t>(k - 1)];
        const auto& b = vf.comp[static_cast<std::size_t>(k - 1)];
        for (std::size_t i = 0; i < a.lambda.size(); ++i)
            defect = std::max(defect, std::abs(a.value[i] - a.lambda[i] * b.value[i]));
    }
    return defect;
}

/// Fraction of the L²_q mass lying above lambda_cut.
inline double tail_fraction(const StarNetwork& net, const SpectralVector& g, double lambda_cut) {
    double total = 0.0, tail = 0.0;
    for (int k = 1; k <= g.size(); ++k) {
        const auto& comp = g.comp[static_cast<std::size_t>(k - 1)];
        for (std::size_t i = 0; i < comp.lambda.size(); ++i) {
            const double m = comp.w[i] * spectral_weight(net, k, comp.lambda[i]) * std::norm(comp.value[i]);
            total += m;
            if (comp.lambda[i] > lambda_cut) tail += m;
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

/**
 * Picks a truncation energy whose unresolved tail is below `target` of the
 * total mass.  The mass beyond the grid is estimated by extrapolating the
 * per-octave decay ratio of the resolved tail.
 */
inline double choose_lambda_max(const StarNetwork& net, const SpectralVector& g,
                                double target = 1e-8) {
    const double top = [&] {
        double t = 0.0;
        for (const auto& c : g.comp)
            if (!c.lambda.empty()) t = std::max(t, c.lambda.back());
        return t;
    }();
    double cut = net.potential(net.size()) + 1.0;
    while (cut < top) {
        const double f_cut = tail_fraction(net, g, cut);
        const double f_half = tail_fraction(net, g, 0.5 * (cut + top));
        const double ratio = f_cut > 0.0 ? f_half / f_cut : 0.0;
        const double beyond = tail_fraction(net, g, top);
        const double est = f_cut + (ratio < 1.0 ? beyond * ratio / (1.0 - ratio) : beyond);
        if (est < target) return cut;
        cut *= 2.0;
    }
    return top;
}

} // namespace kgstar
