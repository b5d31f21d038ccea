#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgstar/analysis.hpp"
#include "kgstar/asymptotics.hpp"
#include "kgstar/config.hpp"
#include "kgstar/io.hpp"
#include "kgstar/network.hpp"
#include "kgstar/parallel.hpp"
#include "kgstar/propagator.hpp"
#include "kgstar/rng.hpp"
#include "kgstar/transform.hpp"

namespace kgstar::cli {

struct RunOptions {
    std::string out_dir;    // overrides config when non-empty
    int threads = 0;        // overrides config when > 0
    long panel_cap = 0;     // overrides config when > 0
};

namespace detail {

using nlohmann::json;

struct Context {
    ExperimentConfig cfg;
    Experiment exp;
    std::filesystem::path out;
    int threads = 1;
    QuadOptions quad;
    std::string hash;
};

inline Context make_context(const ExperimentConfig& cfg, const RunOptions& opts) {
    Context ctx{cfg, validate_config(cfg), {}, 1, {}, fnv1a_hex(cfg.raw_text)};
    ctx.out = opts.out_dir.empty() ? cfg.out_dir : opts.out_dir;
    ctx.threads = opts.threads > 0 ? opts.threads
                  : cfg.threads > 0 ? cfg.threads
                                    : default_threads();
    ctx.quad.panel_cap = opts.panel_cap > 0 ? opts.panel_cap : cfg.panel_cap;
    ctx.quad.min_panels = cfg.min_panels;
    std::filesystem::create_directories(ctx.out);
    return ctx;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string());
    os << text;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

inline std::vector<double> default_slopes(const Context& ctx) {
    if (!ctx.cfg.slopes.empty()) return ctx.cfg.slopes;
    const Cone co = cone(ctx.exp.net, ctx.exp.r, ctx.exp.profile.lambda_min,
                         ctx.exp.profile.lambda_max);
    return {0.5 * co.slope_min, co.center_slope(), 2.0 * co.slope_max};
}

// ---- validate -------------------------------------------------------------

inline int cmd_validate(const Context& ctx, std::ostream& os) {
    const StarNetwork& net = ctx.exp.net;
    os << "network: n = " << net.size() << "\n";
    os << "branch  c              a\n";
    for (int k = 1; k <= net.size(); ++k)
        os << "  " << k << "     " << fmt17(net.speed(k)) << "  " << fmt17(net.potential(k)) << "\n";
    os << "band    lo             hi             multiplicity\n";
    for (int j = 1; j <= net.size(); ++j) {
        const SpectralBand b = band(net, j);
        os << "  " << j << "     " << fmt17(b.lo) << "  "
           << (b.unbounded() ? std::string("inf") : fmt17(b.hi)) << "  " << j
           << (b.degenerate() ? "  (degenerate)" : "") << "\n";
    }
    os << "profile: j = " << ctx.exp.profile.j << ", k = " << ctx.exp.profile.k << ", supp = ["
       << fmt17(ctx.exp.profile.lambda_min) << ", " << fmt17(ctx.exp.profile.lambda_max)
       << "], r = " << ctx.exp.r << "\n";
    return 0;
}

// ---- eigen-check ----------------------------------------------------------

inline int cmd_eigen_check(const Context& ctx) {
    const StarNetwork& net = ctx.exp.net;
    Rng rng(ctx.cfg.seed);

    std::ofstream csv_os(ctx.out / "eigen_defects.csv", std::ios::binary);
    CsvWriter csv(csv_os);
    csv.header({"band", "lambda", "family", "sign", "t0_defect", "t1_defect"});

    double max_t0 = 0.0, max_t1 = 0.0;
    long samples = 0;
    for (int b = 1; b <= net.size(); ++b) {
        const SpectralBand sb = band(net, b);
        if (sb.degenerate()) continue;
        const double hi = sb.unbounded() ? sb.lo + 10.0 : sb.hi;
        const double margin = 1e-6 * (hi - sb.lo) + 10.0 * threshold_guard;
        for (int i = 0; i < 100; ++i) {
            const double lam = rng.uniform(sb.lo + margin, hi - margin);
            for (int j = 1; j <= net.size(); ++j) {
                for (const Sign sign : {Sign::plus, Sign::minus}) {
                    const KirchhoffDefects kd = kirchhoff_defects(net, j, sign, lam);
                    max_t0 = std::max(max_t0, kd.t0);
                    max_t1 = std::max(max_t1, kd.t1);
                    ++samples;
                    csv.row({std::to_string(b), fmt17(lam), std::to_string(j),
                             sign == Sign::plus ? "+" : "-", fmt17(kd.t0), fmt17(kd.t1)});
                }
            }
        }
    }

    std::vector<double> orders;
    for (int i = 0; i < 20; ++i) {
        const int b = rng.uniform_int(1, net.size());
        const SpectralBand sb = band(net, b);
        if (sb.degenerate()) continue;
        const double hi = sb.unbounded() ? sb.lo + 10.0 : sb.hi;
        const double span = hi - sb.lo;
        const double lam = rng.uniform(sb.lo + 0.1 * span, hi - 0.1 * span);
        const int j = rng.uniform_int(1, net.size());
        const int k = rng.uniform_int(1, net.size());
        const double x = rng.uniform(0.5, 3.0);
        const double h = 1e-3;
        const double r1 = ode_residual(net, j, Sign::minus, lam, k, x, h);
        const double r2 = ode_residual(net, j, Sign::minus, lam, k, x, 0.5 * h);
        if (r1 > 1e-14 && r2 > 1e-14) orders.push_back(std::log2(r1 / r2));
    }
    double omin = 0.0, omax = 0.0, omean = 0.0;
    if (!orders.empty()) {
        omin = *std::min_element(orders.begin(), orders.end());
        omax = *std::max_element(orders.begin(), orders.end());
        for (const double o : orders) omean += o;
        omean /= static_cast<double>(orders.size());
    }

    json summary{{"config_hash", ctx.hash},
                 {"command", "eigen-check"},
                 {"samples", samples},
                 {"max_t0_defect", max_t0},
                 {"max_t1_defect", max_t1},
                 {"ode_order", {{"min", omin}, {"mean", omean}, {"max", omax},
                                {"count", orders.size()}}}};
    write_json(ctx.out / "eigen_summary.json", summary);
    std::cout << "eigen-check: " << samples << " samples, max t0 = " << max_t0
              << ", max t1 = " << max_t1 << ", ode order mean = " << omean << "\n";
    return (max_t0 <= 1e-10 && max_t1 <= 1e-10) ? 0 : 1;
}

// ---- transform-check ------------------------------------------------------

inline int cmd_transform_check(const Context& ctx) {
    const StarNetwork& net = ctx.exp.net;
    const double x0 = 3.5, sigma = 0.4, x_max = 8.0;

    BranchFunction f = BranchFunction::zero(net.size(), x_max, 0.01);
    f.f[0] = [x0, sigma](double x) {
        const double u = (x - x0) / sigma;
        return Complex{std::exp(-0.5 * u * u), 0.0};
    };
    f.d2.assign(static_cast<std::size_t>(net.size()), [](double) { return Complex{0.0, 0.0}; });
    f.d2[0] = [x0, sigma](double x) {
        const double u = (x - x0) / sigma;
        return Complex{std::exp(-0.5 * u * u) * (u * u - 1.0) / (sigma * sigma), 0.0};
    };

    double cmax = 0.0;
    for (int k = 1; k <= net.size(); ++k) cmax = std::max(cmax, net.speed(k));
    SpectralGrid grid{net.potential(net.size()) + 21.0 * cmax / (sigma * sigma), 64, 16, 1e-5, 1};

    const double iso = isometry_defect(net, f, grid, ctx.threads);
    const double iso_fine = isometry_defect(net, f, grid.refined(), ctx.threads);
    const double diag = diagonalization_defect(net, f, grid, DerivativeMode::analytic, 0.0,
                                               ctx.threads);
    const double d1 = diagonalization_defect(net, f, grid, DerivativeMode::finite_difference,
                                             1e-2, ctx.threads);
    const double d2 = diagonalization_defect(net, f, grid, DerivativeMode::finite_difference,
                                             5e-3, ctx.threads);
    const double fd_order = std::log2(d1 / d2);

    json summary{{"config_hash", ctx.hash},
                 {"command", "transform-check"},
                 {"lambda_max", grid.lambda_max},
                 {"isometry_defect", iso},
                 {"isometry_defect_refined", iso_fine},
                 {"refinement_monotone", iso_fine <= 1.1 * iso || iso_fine < 1e-9},
                 {"diagonalization_defect_analytic", diag},
                 {"diagonalization_fd_order", fd_order}};
    write_json(ctx.out / "transform_summary.json", summary);
    std::cout << "transform-check: isometry defect = " << iso << " (refined " << iso_fine
              << "), diag defect = " << diag << ", fd order = " << fd_order << "\n";
    return (iso < 1e-3 && diag < 1e-6) ? 0 : 1;
}

// ---- simulate ---------------------------------------------------------------

inline int cmd_simulate(const Context& ctx) {
    const auto slopes = default_slopes(ctx);
    const auto& ts = ctx.cfg.t_list;

    std::vector<FieldSample> all(slopes.size() * ts.size());
    parallel_for(all.size(), ctx.threads, [&](std::size_t i) {
        const double slope = slopes[i / ts.size()];
        const double t = ts[i % ts.size()];
        all[i] = solution(ctx.exp.net, ctx.exp.profile, ctx.exp.r, t, t / slope, Form::p_form,
                          ctx.quad);
    });

    std::ofstream os(ctx.out / "field.csv", std::ios::binary);
    CsvWriter csv(os);
    csv.header({"t", "x", "branch", "re_u", "im_u", "abs_u", "re_uplus", "im_uplus", "re_uminus",
                "im_uminus"});
    for (const FieldSample& fs : all)
        csv.row({fmt17(fs.t), fmt17(fs.x), std::to_string(fs.r), fmt17(fs.value.real()),
                 fmt17(fs.value.imag()), fmt17(std::abs(fs.value)), fmt17(fs.value_plus.real()),
                 fmt17(fs.value_plus.imag()), fmt17(fs.value_minus.real()),
                 fmt17(fs.value_minus.imag())});

    json summary{{"config_hash", ctx.hash},
                 {"command", "simulate"},
                 {"slopes", slopes},
                 {"t_list", ts},
                 {"rows", all.size()}};
    write_json(ctx.out / "field_summary.json", summary);
    std::cout << "simulate: wrote " << all.size() << " field samples\n";
    return 0;
}

// ---- asymptotics ------------------------------------------------------------

inline int cmd_asymptotics(const Context& ctx) {
    const auto slopes = default_slopes(ctx);
    const auto& ts = ctx.cfg.t_list;
    const Cone co = cone(ctx.exp.net, ctx.exp.r, ctx.exp.profile.lambda_min,
                         ctx.exp.profile.lambda_max);

    std::ofstream os(ctx.out / "asymptotics.csv", std::ios::binary);
    CsvWriter csv(os);
    csv.header({"slope", "t", "x", "region", "p0", "lambda_star", "h1", "h2", "abs_H", "re_H",
                "im_H", "phase_at_p0"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const double slope : slopes) {
        for (const double t : ts) {
            const double x = t / slope;
            if (co.contains(t, x)) {
                const AsymptoticTerm term = leading_coefficient(
                    ctx.exp.net, ctx.exp.profile, ctx.exp.r, t, x);
                csv.row({fmt17(slope), fmt17(t), fmt17(x), "inside_cone", fmt17(term.p0),
                         fmt17(term.lambda_star), fmt17(term.h1), fmt17(term.h2),
                         fmt17(std::abs(term.H)), fmt17(term.H.real()), fmt17(term.H.imag()),
                         fmt17(term.phase_at_p0)});
            } else {
                const bool in_light = co.c_r * slope * slope > 1.0;
                csv.row({fmt17(slope), fmt17(t), fmt17(x),
                         in_light ? "outside_cone" : "outside_light_cone", fmt17(nan), fmt17(nan),
                         fmt17(nan), fmt17(nan), fmt17(nan), fmt17(nan), fmt17(nan), fmt17(nan)});
            }
        }
    }

    json summary{{"config_hash", ctx.hash},
                 {"command", "asymptotics"},
                 {"cone", {{"slope_min", co.slope_min}, {"slope_max", co.slope_max},
                           {"v_min", co.v_min}, {"v_max", co.v_max},
                           {"center_slope", co.center_slope()}}}};
    try {
        summary["sup_bound"] = coefficient_sup_bound(ctx.exp.net, ctx.exp.profile, ctx.exp.r);
    } catch (const Error&) {
        summary["sup_bound"] = nullptr;
    }
    write_json(ctx.out / "asymptotics_summary.json", summary);
    std::cout << "asymptotics: cone slopes [" << co.slope_min << ", " << co.slope_max << "]\n";
    return 0;
}

// ---- decay-scan ---------------------------------------------------------------

inline int cmd_decay_scan(const Context& ctx) {
    const auto slopes = default_slopes(ctx);
    const auto scans = cone_raster(ctx.exp.net, ctx.exp.profile, ctx.exp.r, slopes,
                                   ctx.cfg.t_list, ctx.quad, ctx.threads);
    const Cone co = cone(ctx.exp.net, ctx.exp.r, ctx.exp.profile.lambda_min,
                         ctx.exp.profile.lambda_max);

    std::ofstream os(ctx.out / "decay.csv", std::ios::binary);
    CsvWriter csv(os);
    csv.header({"slope", "t", "abs_u", "abs_uplus", "H_abs", "remainder_product"});
    for (const RayScan& scan : scans)
        for (std::size_t i = 0; i < scan.t.size(); ++i)
            csv.row({fmt17(scan.slope), fmt17(scan.t[i]), fmt17(scan.abs_u[i]),
                     fmt17(scan.abs_uplus[i]), fmt17(scan.abs_H[i]),
                     fmt17(scan.remainder_product[i])});

    json per_slope = json::array();
    for (const RayScan& scan : scans) {
        per_slope.push_back({{"slope", scan.slope},
                             {"region", to_string(scan.region)},
                             {"exponent", scan.fit_uplus.exponent},
                             {"intercept", scan.fit_uplus.intercept},
                             {"residual", scan.fit_uplus.residual},
                             {"n_points", scan.fit_uplus.n_points}});
        std::cout << "decay-scan: slope " << scan.slope << " [" << to_string(scan.region)
                  << "] exponent = " << scan.fit_uplus.exponent << "\n";
    }

    json summary{{"config_hash", ctx.hash}, {"command", "decay-scan"}, {"rays", per_slope}};
    try {
        const RemainderTable table = remainder_table(ctx.exp.net, ctx.exp.profile, ctx.exp.r,
                                                     co.center_slope(), ctx.cfg.t_list, ctx.quad);
        json rows = json::array();
        for (const RemainderRow& row : table.rows)
            rows.push_back({{"t", row.t}, {"product", row.product}});
        summary["remainder"] = {{"slope", co.center_slope()},
                                {"c_est", table.c_est},
                                {"bounded", table.bounded},
                                {"rows", rows}};
    } catch (const OutsideCone&) {
        summary["remainder"] = nullptr;  // degenerate cone has no interior ray
    }
    write_json(ctx.out / "decay_summary.json", summary);
    return 0;
}

// ---- step-sweep -----------------------------------------------------------------

inline int cmd_step_sweep(const Context& ctx) {
    const StarNetwork& net = ctx.exp.net;
    if (net.size() != 2 || net.speed(1) != 1.0 || net.speed(2) != 1.0)
        throw ValidationError("step-sweep requires a two-branch network with c = (1, 1)");
    const double a1 = net.potential(1);

    const auto rows = step_sweep(a1, ctx.cfg.a2_grid, ctx.cfg.profile_alpha, ctx.cfg.profile_beta,
                                 ctx.cfg.rays_per_cone, ctx.cfg.t_list, ctx.quad, ctx.threads);

    std::ofstream os(ctx.out / "sweep.csv", std::ios::binary);
    CsvWriter csv(os);
    csv.header({"a2", "slope_min", "slope_max", "aperture", "maxH", "bound",
                "fitted_slope_running"});
    for (const StepSweepRow& row : rows)
        csv.row({fmt17(row.a2), fmt17(row.slope_min), fmt17(row.slope_max), fmt17(row.aperture),
                 fmt17(row.max_abs_H), fmt17(row.bound), fmt17(row.fitted_slope_running)});

    json jrows = json::array();
    for (const StepSweepRow& row : rows)
        jrows.push_back({{"a2", row.a2},
                         {"xt_lo", row.xt_lo},
                         {"xt_hi", row.xt_hi},
                         {"max_abs_H", row.max_abs_H},
                         {"bound", row.bound},
                         {"abs_u_ref", row.abs_u_ref}});
    json summary{{"config_hash", ctx.hash},
                 {"command", "step-sweep"},
                 {"a1", a1},
                 {"alpha", ctx.cfg.profile_alpha},
                 {"beta", ctx.cfg.profile_beta},
                 {"rows", jrows},
                 {"fitted_slope_total", rows.back().fitted_slope_running}};
    write_json(ctx.out / "sweep_summary.json", summary);
    std::cout << "step-sweep: fitted max|H| slope = " << rows.back().fitted_slope_running << "\n";
    return 0;
}

} // namespace detail

/**
 * Runs a CLI command against a parsed config.  Exit status: 0 on success,
 * 1 on validation failure, 2 on runtime errors (oscillation budget etc.).
 */
inline int run(const std::string& command, const ExperimentConfig& cfg,
               const RunOptions& opts = {}) {
    try {
        const detail::Context ctx = detail::make_context(cfg, opts);
        if (command == "validate") return detail::cmd_validate(ctx, std::cout);
        if (command == "eigen-check") return detail::cmd_eigen_check(ctx);
        if (command == "transform-check") return detail::cmd_transform_check(ctx);
        if (command == "simulate") return detail::cmd_simulate(ctx);
        if (command == "asymptotics") return detail::cmd_asymptotics(ctx);
        if (command == "decay-scan") return detail::cmd_decay_scan(ctx);
        if (command == "step-sweep") return detail::cmd_step_sweep(ctx);
        std::cerr << "unknown command: " << command << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace kgstar::cli
