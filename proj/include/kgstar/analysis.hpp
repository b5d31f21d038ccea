#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "kgstar/asymptotics.hpp"
#include "kgstar/errors.hpp"
#include "kgstar/fit.hpp"
#include "kgstar/parallel.hpp"
#include "kgstar/propagator.hpp"

namespace kgstar {

/// Field magnitudes sampled along a fixed-slope ray t/x = slope; λ* and
/// hence |H| are constant on such rays, which is what makes the decay
/// exponent observable from |u| alone.
struct RaySeries {
    double slope = 0.0;
    std::vector<std::pair<double, double>> samples;  // (t, |u|), t increasing
};

struct DecayReport {
    double exponent = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // max log-log deviation from the fitted line
    int n_points = 0;
};

/// Least-squares power-law fit in (log t, log |u|).
inline DecayReport decay_fit(const RaySeries& series) {
    if (series.samples.size() < 5)
        throw ParameterViolation("decay_fit needs at least 5 samples, got " +
                                 std::to_string(series.samples.size()));
    std::vector<double> t, u;
    for (const auto& [ti, ui] : series.samples) {
        if (!(ui > 0.0))
            throw NonPositiveSample("|u| = " + std::to_string(ui) + " at t = " + std::to_string(ti));
        t.push_back(ti);
        u.push_back(ui);
    }
    const LineFit f = loglog_fit(t, u);
    return DecayReport{f.slope, f.intercept, f.max_residual, static_cast<int>(t.size())};
}

struct RemainderRow {
    double t = 0.0;
    double product = 0.0;  // t · |u₊ - H t^{-1/2}|
};

struct RemainderTable {
    std::vector<RemainderRow> rows;
    double c_est = 0.0;    // max over the grid; empirical stand-in for the remainder constant
    bool bounded = false;  // last-third max ≤ 1.5 × first-third max
};

/**
 * Remainder products t·|u₊ - H t^{-1/2}| along an in-cone ray, with H in
 * matched_form (the normalization that reproduces u₊'s leading term).
 * Boundedness of the products is the testable form of the O(t^{-1})
 * remainder claim.
 */
inline RemainderTable remainder_table(const StarNetwork& net, const SpectralProfile& prof,
                                      int r, double slope, const std::vector<double>& t_list,
                                      const QuadOptions& opts = {}) {
    const Cone co = cone(net, r, prof.lambda_min, prof.lambda_max);
    if (!co.contains_slope(slope))
        throw OutsideCone("slope " + std::to_string(slope) + " not strictly inside the cone");
    RemainderTable table;
    for (const double t : t_list) {
        const double x = t / slope;
        const Complex up = u_plus(net, prof, r, t, x, Form::p_form, opts);
        const AsymptoticTerm term =
            leading_coefficient(net, prof, r, t, x, LeadingTermConvention::matched_form);
        const double product = t * std::abs(up - term.H / std::sqrt(t));
        table.rows.push_back({t, product});
        table.c_est = std::max(table.c_est, product);
    }
    const std::size_t n = table.rows.size();
    const std::size_t third = n / 3;
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < third; ++i) first = std::max(first, table.rows[i].product);
    for (std::size_t i = n - third; i < n; ++i) last = std::max(last, table.rows[i].product);
    table.bounded = third == 0 || last <= 1.5 * first;
    return table;
}

enum class RayRegion { inside_cone, outside_cone, outside_light_cone };

inline const char* to_string(RayRegion rr) {
    switch (rr) {
        case RayRegion::inside_cone: return "inside_cone";
        case RayRegion::outside_cone: return "outside_cone";
        default: return "outside_light_cone";
    }
}

/// One ray of a cone raster: per-t magnitudes plus the fitted exponent of
/// |u₊|.  |H| and remainder products are NaN off the cone.
struct RayScan {
    double slope = 0.0;
    RayRegion region = RayRegion::outside_cone;
    DecayReport fit_uplus;
    std::vector<double> t, abs_u, abs_uplus, abs_H, remainder_product;
};

inline std::vector<RayScan> cone_raster(const StarNetwork& net, const SpectralProfile& prof,
                                        int r, const std::vector<double>& slopes,
                                        const std::vector<double>& t_list,
                                        const QuadOptions& opts = {}, int threads = 1) {
    const Cone co = cone(net, r, prof.lambda_min, prof.lambda_max);
    std::vector<RayScan> scans(slopes.size());
    parallel_for(slopes.size(), threads, [&](std::size_t idx) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        RayScan scan;
        scan.slope = slopes[idx];
        if (co.contains_slope(scan.slope))
            scan.region = RayRegion::inside_cone;
        else if (co.c_r * scan.slope * scan.slope > 1.0)
            scan.region = RayRegion::outside_cone;
        else
            scan.region = RayRegion::outside_light_cone;
        RaySeries series;
        series.slope = scan.slope;
        for (const double t : t_list) {
            const double x = t / scan.slope;
            FieldSample fs;
            try {
                fs = solution(net, prof, r, t, x, Form::p_form, opts);
            } catch (const BudgetExceeded&) {
                continue;  // over-budget samples are excluded from the fit
            }
            scan.t.push_back(t);
            scan.abs_u.push_back(std::abs(fs.value));
            scan.abs_uplus.push_back(std::abs(fs.value_plus));
            if (scan.region == RayRegion::inside_cone) {
                const AsymptoticTerm term = leading_coefficient(
                    net, prof, r, t, x, LeadingTermConvention::matched_form);
                scan.abs_H.push_back(std::abs(term.H));
                scan.remainder_product.push_back(t * std::abs(fs.value_plus - term.H / std::sqrt(t)));
            } else {
                scan.abs_H.push_back(nan);
                scan.remainder_product.push_back(nan);
            }
            series.samples.emplace_back(t, std::abs(fs.value_plus));
        }
        scan.fit_uplus = decay_fit(series);
        scans[idx] = std::move(scan);
    });
    return scans;
}

} // namespace kgstar
