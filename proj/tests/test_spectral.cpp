#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "kgstar/spectral.hpp"
#include "test_util.hpp"

using namespace kgstar;
using Catch::Approx;

namespace {

// Independent polar-form evaluator of the branch square root: measure the
// angle with atan2, remap +π to -π, halve it.
Complex polar_sqrt_oracle(double re, double im) {
    const double r = std::hypot(re, im);
    if (r == 0.0) return {0.0, 0.0};
    double phi = std::atan2(im, re);
    const double pi = std::acos(-1.0);
    if (phi >= pi) phi = -pi;
    return {std::sqrt(r) * std::cos(0.5 * phi), std::sqrt(r) * std::sin(0.5 * phi)};
}

const StarNetwork sym2 = validate_network({1.0, 1.0}, {0.0, 0.0});
const StarNetwork step2 = validate_network({1.0, 1.0}, {0.0, 3.0});

} // namespace

TEST_CASE("wavenumber follows the stated square-root branch", "[spectral]") {
    const StarNetwork net = validate_network({1.0, 4.0}, {0.0, 1.0});

    CHECK(wavenumber(net, 1, 4.0) == Complex{2.0, 0.0});
    CHECK(wavenumber(net, 1, 0.0) == Complex{0.0, 0.0});

    // (0 - 1)/4 = 0.25 e^{-iπ}, root -0.5i by the branch convention
    const Complex below = wavenumber(net, 2, 0.0);
    CHECK(below.real() == Approx(0.0).margin(1e-15));
    CHECK(below.imag() == Approx(-0.5).margin(1e-15));
    const Complex oracle = polar_sqrt_oracle(-0.25, 0.0);
    CHECK(std::abs(below - oracle) < 1e-15);
}

TEST_CASE("branch sqrt matches the polar oracle on random inputs", "[spectral]") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double re = rng.uniform(-5.0, 5.0);
        CHECK(std::abs(branch_sqrt(Complex{re, 0.0}) - polar_sqrt_oracle(re, 0.0)) < 1e-14);
    }
}

TEST_CASE("branch-cut invariant: decaying side below threshold", "[spectral]") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const StarNetwork net = kgtest::random_network(rng);
        const int k = rng.uniform_int(1, net.size());
        const double ak = net.potential(k);
        const double above = wavenumber(net, k, ak + rng.uniform(0.1, 5.0)).real();
        CHECK(above > 0.0);
        CHECK(wavenumber(net, k, ak + rng.uniform(0.1, 5.0)).imag() == 0.0);
        const Complex below = wavenumber(net, k, ak - rng.uniform(0.1, 5.0));
        CHECK(below.real() == 0.0);
        CHECK(below.imag() < 0.0);
    }
}

TEST_CASE("wavenumber scale covariance", "[spectral]") {
    Rng rng(9);
    const StarNetwork unit = validate_network({1.0, 1.0}, {0.0, 0.0});
    for (int i = 0; i < 100; ++i) {
        const StarNetwork net = kgtest::random_network(rng);
        const int k = rng.uniform_int(1, net.size());
        const double lam = rng.uniform(-3.0, 8.0);
        const double reduced = (lam - net.potential(k)) / net.speed(k);
        CHECK(std::abs(wavenumber(net, k, lam) - wavenumber(unit, 1, reduced)) < 1e-15);
    }
}

TEST_CASE("coupling coefficient values", "[spectral]") {
    CHECK(std::abs(coupling_coefficient(sym2, 1, 1.0) - Complex{-1.0, 0.0}) < 1e-15);

    // xi_1 = 2, xi_2 = 1 at lambda = 4
    CHECK(std::abs(coupling_coefficient(step2, 1, 4.0) - Complex{-0.5, 0.0}) < 1e-15);

    // xi_2 = -i sqrt(2), so s_1 = i sqrt(2)
    const Complex s1 = coupling_coefficient(step2, 1, 1.0);
    CHECK(s1.real() == Approx(0.0).margin(1e-15));
    CHECK(s1.imag() == Approx(std::sqrt(2.0)).epsilon(1e-15));

    CHECK_THROWS_AS(coupling_coefficient(step2, 2, 3.0), AtThreshold);
    CHECK_THROWS_AS(coupling_coefficient(step2, 1, 3.0 + 1e-10), AtThreshold);
}

TEST_CASE("spectral weight values and positivity", "[spectral]") {
    CHECK(spectral_weight(step2, 2, 1.0) == 0.0);
    CHECK(spectral_weight(sym2, 1, 1.0) == Approx(0.25).epsilon(1e-15));
    CHECK(spectral_weight(step2, 1, 4.0) == Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK_THROWS_AS(spectral_weight(step2, 1, 3.0), AtThreshold);

    Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        const StarNetwork net = kgtest::random_network(rng);
        const int l = rng.uniform_int(1, net.size());
        const double lam = rng.uniform(0.05, net.potential(net.size()) + 4.0);
        bool near = false;
        for (int m = 1; m <= net.size(); ++m)
            near = near || std::abs(lam - net.potential(m)) < 1e-6;
        if (near) continue;
        const double q = spectral_weight(net, l, lam);
        CHECK(q >= 0.0);
        if (lam < net.potential(l)) CHECK(q == 0.0);
    }
}

TEST_CASE("eigenfunctions equal one at the vertex", "[spectral]") {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        const StarNetwork net = kgtest::random_network(rng);
        const int j = rng.uniform_int(1, net.size());
        const int k = rng.uniform_int(1, net.size());
        const double lam = rng.uniform(0.05, net.potential(net.size()) + 4.0);
        bool near = false;
        for (int m = 1; m <= net.size(); ++m)
            near = near || std::abs(lam - net.potential(m)) < 1e-6;
        if (near) continue;
        const Sign sign = rng.uniform_int(0, 1) ? Sign::plus : Sign::minus;
        CHECK(std::abs(eigenfunction(net, j, sign, lam, k, 0.0) - Complex{1.0, 0.0}) < 1e-14);
    }
}

TEST_CASE("symmetric two-branch eigenfunction is a plane wave", "[spectral]") {
    // s_1 = -1, so the family-1 component reduces to cos x + i sin x
    const double x = std::acos(-1.0) / 2.0;
    const Complex v = eigenfunction(sym2, 1, Sign::minus, 1.0, 1, x);
    CHECK(std::abs(v - Complex{0.0, 1.0}) < 1e-14);
}

TEST_CASE("tunnel components decay exponentially", "[spectral]") {
    const Complex v = eigenfunction(step2, 1, Sign::minus, 1.0, 2, 1.0);
    CHECK(std::abs(v) == Approx(std::exp(-std::sqrt(2.0))).epsilon(1e-12));

    // modulus law |F| = e^{-|xi| x} exactly, monotone in x
    Rng rng(19);
    for (int i = 0; i < 50; ++i) {
        const StarNetwork net = kgtest::random_network(rng, 3, 6);
        const int j = 1;
        const SpectralBand b = band(net, j);
        if (b.degenerate()) continue;
        const double lam = 0.5 * (b.lo + b.hi);
        for (int k = j + 1; k <= net.size(); ++k) {
            if (std::abs(lam - net.potential(k)) < 1e-6) continue;
            const double rate = std::abs(wavenumber(net, k, lam).imag());
            double prev = 1.0;
            for (const double x : {0.5, 1.0, 2.0, 4.0}) {
                const double mag = std::abs(eigenfunction(net, j, Sign::minus, lam, k, x));
                CHECK(mag == Approx(std::exp(-rate * x)).epsilon(1e-12));
                CHECK(mag < prev);
                prev = mag;
            }
        }
    }
}

TEST_CASE("vertex conditions hold to rounding for the examples", "[spectral]") {
    const KirchhoffDefects d1 = kirchhoff_defects(sym2, 1, Sign::minus, 1.0);
    CHECK(d1.t0 <= 1e-12);
    CHECK(d1.t1 <= 1e-12);

    const StarNetwork net3 = validate_network({1.0, 2.0, 3.0}, {0.0, 1.0, 2.0});
    const KirchhoffDefects d2 = kirchhoff_defects(net3, 2, Sign::plus, 1.5);
    CHECK(d2.t0 <= 1e-12);
    CHECK(d2.t1 <= 1e-12);

    const KirchhoffDefects d3 = kirchhoff_defects(step2, 1, Sign::minus, 4.0);
    CHECK(d3.t0 <= 1e-12);
    CHECK(d3.t1 <= 1e-12);
}

TEST_CASE("vertex defects vanish across random networks and bands", "[spectral]") {
    Rng rng(23);
    for (int i = 0; i < 8; ++i) {
        const StarNetwork net = kgtest::random_network(rng, 2, 6);
        for (int b = 1; b <= net.size(); ++b) {
            const SpectralBand sb = band(net, b);
            if (sb.degenerate()) continue;
            const double hi = sb.unbounded() ? sb.lo + 8.0 : sb.hi;
            for (int s = 0; s < 100; ++s) {
                const double lam = rng.uniform(sb.lo + 1e-5, hi - 1e-5);
                for (int j = 1; j <= net.size(); ++j) {
                    for (const Sign sign : {Sign::plus, Sign::minus}) {
                        const KirchhoffDefects kd = kirchhoff_defects(net, j, sign, lam);
                        REQUIRE(kd.t0 <= 1e-10);
                        REQUIRE(kd.t1 <= 1e-10);
                    }
                }
            }
        }
    }
}

TEST_CASE("ode residual is second order in the step", "[spectral]") {
    // residual functional applied to the zero function vanishes identically
    const auto zero_residual = [](double x, double h) {
        const auto z = [](double) { return Complex{0.0, 0.0}; };
        return std::abs(-1.0 * (z(x + h) - 2.0 * z(x) + z(x - h)) / (h * h) + 0.0 * z(x));
    };
    CHECK(zero_residual(1.0, 1e-3) == 0.0);

    CHECK(ode_residual(sym2, 1, Sign::minus, 1.0, 1, 1.0, 1e-3) < 1e-5);

    const double r1 = ode_residual(sym2, 1, Sign::minus, 1.0, 1, 1.0, 4e-3);
    const double r2 = ode_residual(sym2, 1, Sign::minus, 1.0, 1, 1.0, 2e-3);
    CHECK(r1 / r2 == Approx(4.0).epsilon(0.10));

    Rng rng(29);
    int checked = 0;
    while (checked < 30) {
        const StarNetwork net = kgtest::random_network(rng);
        const int b = rng.uniform_int(1, net.size());
        const SpectralBand sb = band(net, b);
        if (sb.degenerate()) continue;
        const double hi = sb.unbounded() ? sb.lo + 6.0 : sb.hi;
        const double lam = rng.uniform(sb.lo + 0.2 * (hi - sb.lo), hi - 0.2 * (hi - sb.lo));
        const int j = rng.uniform_int(1, net.size());
        const int k = rng.uniform_int(1, net.size());
        // keep the fourth derivative scale away from zero so truncation
        // dominates rounding
        if ((lam - net.potential(k)) * (lam - net.potential(k)) / net.speed(k) < 0.05) continue;
        const double x = rng.uniform(0.5, 3.0);
        const double h = 1e-2;
        const double a = ode_residual(net, j, Sign::minus, lam, k, x, h);
        const double bres = ode_residual(net, j, Sign::minus, lam, k, x, 0.5 * h);
        if (a < 1e-12) continue;  // flat spot of the local fourth derivative
        const double order = std::log2(a / bres);
        CHECK(order == Approx(2.0).margin(0.2));
        ++checked;
    }
}
