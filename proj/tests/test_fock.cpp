#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fhl/fock.hpp"
#include "fhl/symbols.hpp"
#include "oracles.hpp"

using namespace fhl;
using namespace fhl::fock;

TEST_CASE("monomial norms match the Gaussian closed form") {
    // c_k = pi k! / (2 alpha)^{k+1}
    const RadialWeight half = RadialWeight::classical();
    REQUIRE(std::abs(monomial_norm(half, 0) - kPi) <= 1e-10 * kPi);
    REQUIRE(std::abs(monomial_norm(half, 2) - 2.0 * kPi) <= 1e-10 * 2.0 * kPi);

    const RadialWeight one = RadialWeight::gaussian(1.0);
    REQUIRE(std::abs(monomial_norm(one, 0) - kPi / 2) <= 1e-10 * kPi);

    for (double alpha : {0.5, 1.0, 1.7}) {
        const RadialWeight w = RadialWeight::gaussian(alpha);
        for (int k : {0, 1, 2, 5, 17, 60, 150, 400}) {
            const double expected =
                std::log(kPi) + std::lgamma(k + 1.0) - (k + 1.0) * std::log(2.0 * alpha);
            REQUIRE(std::abs(log_monomial_norm(w, k) - expected) <= 1e-10);
        }
    }
}

TEST_CASE("norm ratios follow (k+1)/(2 alpha) in the log domain") {
    const RadialWeight w = RadialWeight::gaussian(0.5);
    const FockBasis basis(w, 220);
    for (int k = 0; k < 220; ++k) {
        const double got = basis.log_norm(k + 1) - basis.log_norm(k);
        const double expected = std::log((k + 1.0) / 1.0);
        REQUIRE(std::abs(got - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("custom weights are validated against their curvature bounds") {
    // phi = alpha rho^2 + beta log(1 + rho^2) has laplacian 4 alpha + 4 beta / (1+rho^2)^2
    const double alpha = 0.5, beta = 0.25;
    auto phi = [=](double rho) { return alpha * rho * rho + beta * std::log1p(rho * rho); };
    auto lap = [=](double rho) {
        const double d = 1.0 + rho * rho;
        return 4.0 * alpha + 4.0 * beta / (d * d);
    };
    REQUIRE_NOTHROW(RadialWeight::custom(phi, lap, 4 * alpha, 4 * alpha + 4 * beta));
    REQUIRE_THROWS_AS(RadialWeight::custom(phi, lap, 4 * alpha + 1.0, 4 * alpha + 2.0),
                      InvalidWeightError);
    REQUIRE_THROWS_AS(RadialWeight::custom(phi, lap, -1.0, 2.0), InvalidWeightError);
}

TEST_CASE("basis evaluation") {
    const FockBasis basis(RadialWeight::classical(), 64);
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    REQUIRE(std::abs(basis.eval(0, Complex(3, 4)).real() - inv_sqrt_pi) <= 1e-12);
    REQUIRE(basis.eval(5, Complex(0, 0)) == Complex(0, 0));
    REQUIRE(std::abs(basis.eval(1, Complex(1, 0)) - Complex(inv_sqrt_pi, 0)) <= 1e-12);

    // recurrence agrees with the log-domain evaluation
    std::vector<Complex> e(65);
    const Complex z(1.3, -0.4);
    basis.eval_all(z, e);
    for (int k = 0; k <= 64; ++k)
        REQUIRE(std::abs(e[k] - basis.eval(k, z)) <= 1e-12 * (1.0 + std::abs(e[k])));
}

TEST_CASE("kernel sums converge to the classical closed form") {
    const FockBasis basis(RadialWeight::classical(), 80);
    REQUIRE(std::abs(basis.kernel({0, 0}, {0, 0}, 60) - Complex(1.0 / kPi, 0)) <= 1e-13);
    REQUIRE(std::abs(basis.kernel({1, 0}, {1, 0}, 60) - Complex(std::exp(1.0) / kPi, 0))
            <= 1e-12);
    REQUIRE(std::abs(basis.kernel({0.7, 0.2}, {0, 0}, 60) - Complex(1.0 / kPi, 0)) <= 1e-13);
    // e^{w conj(z)} / pi at a generic pair
    const Complex w(0.9, -0.3), z(0.4, 0.6);
    REQUIRE(std::abs(basis.kernel(w, z, 70) - std::exp(w * std::conj(z)) / kPi) <= 1e-12);
}

TEST_CASE("projection coefficients") {
    const FockBasis basis(RadialWeight::classical(), 48);
    const auto grid = basis.plane_grid(48);

    SECTION("a basis vector projects to a delta") {
        const auto coeffs = basis.project([&](Complex u) { return basis.eval(3, u); }, 8, grid);
        for (int m = 0; m <= 8; ++m) {
            const double expected = m == 3 ? 1.0 : 0.0;
            REQUIRE(std::abs(coeffs[m] - Complex(expected, 0)) <= 1e-9);
        }
    }
    SECTION("the counterexample symbol has no analytic component") {
        const auto f = symbols::Symbol::xia();
        quadrature::GridOptions opts;
        opts.break_radii = {1.0};
        const auto cut_grid =
            quadrature::PolarGrid::plane(basis.weight().truncation_radius_for_degree(12), opts);
        const auto coeffs = basis.project([&](Complex u) { return f(u); }, 12, cut_grid);
        for (const Complex& c : coeffs) REQUIRE(std::abs(c) <= 1e-12);
    }
    SECTION("|z|^2 projects onto the constant with value sqrt(pi)") {
        const auto coeffs =
            basis.project([](Complex u) { return Complex(std::norm(u), 0); }, 4, grid);
        REQUIRE(std::abs(coeffs[0] - Complex(std::sqrt(kPi), 0)) <= 1e-9);
    }
}

TEST_CASE("Gram matrix of the basis is the identity under quadrature") {
    const int n = 16;
    const FockBasis basis(RadialWeight::classical(), n);
    const auto grid = basis.plane_grid(2 * n);
    double worst = 0.0;
    for (int k = 0; k <= n; ++k) {
        const auto col = basis.project([&](Complex u) { return basis.eval(k, u); }, n, grid);
        for (int m = 0; m <= n; ++m) {
            const double expected = m == k ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(col[m] - Complex(expected, 0)));
        }
    }
    REQUIRE(worst <= 1e-9);
}

TEST_CASE("Bessel inequality for projections") {
    const FockBasis basis(RadialWeight::classical(), 40);
    const auto f = symbols::parse_symbol("conj(xia)");
    quadrature::GridOptions opts;
    opts.break_radii = {1.0};
    const auto grid =
        quadrature::PolarGrid::plane(basis.weight().truncation_radius_for_degree(24), opts);
    const auto coeffs = basis.project([&](Complex u) { return f(u); }, 24, grid);
    double captured = 0.0;
    for (const Complex& c : coeffs) captured += std::norm(c);
    const auto norm2 = quadrature::integrate_plane_weighted(
        [&](Complex u) { return std::norm(f(u)); }, basis.weight(),
        basis.weight().truncation_radius_for_degree(24), opts);
    REQUIRE(captured <= norm2.value + 1e-9);
}

TEST_CASE("truncated kernel reproduces basis values") {
    const int terms = 30;
    const FockBasis basis(RadialWeight::classical(), 2 * terms);
    const Complex z(0.7, 0.3);
    const auto grid = basis.plane_grid(2 * terms);
    const auto coeffs =
        basis.project([&](Complex w) { return basis.kernel(w, z, terms); }, terms - 5, grid);
    for (int k = 0; k <= terms - 5; ++k)
        REQUIRE(std::abs(coeffs[k] - std::conj(basis.eval(k, z))) <= 1e-8);
}

TEST_CASE("projection is linear and respects conjugation symmetry") {
    const FockBasis basis(RadialWeight::classical(), 16);
    const auto grid = basis.plane_grid(16);
    auto f = [](Complex u) { return std::exp(-std::norm(u) / 4.0) * u; };
    auto g = [](Complex u) { return Complex(u.real(), 0); };
    const Complex a(1.5, -0.5), b(0.25, 2.0);
    const auto cf = basis.project(f, 6, grid);
    const auto cg = basis.project(g, 6, grid);
    const auto combined =
        basis.project([&](Complex u) { return a * f(u) + b * g(u); }, 6, grid);
    for (int m = 0; m <= 6; ++m)
        REQUIRE(std::abs(combined[m] - (a * cf[m] + b * cg[m])) <= 1e-12);

    // real-valued data: coefficients of conj(f) are the conjugate coefficients
    auto rf = [](Complex u) { return std::exp(-std::norm(u) / 3.0) * (u + std::conj(u)); };
    const auto c1 = basis.project(rf, 6, grid);
    const auto c2 = basis.project([&](Complex u) { return std::conj(rf(u)); }, 6, grid);
    for (int m = 0; m <= 6; ++m) REQUIRE(std::abs(c1[m] - std::conj(c2[m])) <= 1e-12);
}

TEST_CASE("the norm integral tolerates large degrees without overflow") {
    const RadialWeight w = RadialWeight::classical();
    // k = 400: k! overflows doubles long before this, the log path must not
    const double logc = log_monomial_norm(w, 400);
    const double expected = std::log(kPi) + std::lgamma(401.0);
    REQUIRE(std::abs(logc - expected) <= 1e-10);
    REQUIRE(std::isinf(monomial_norm(w, 400)));

    // high-degree evaluation near the origin underflows to a clean zero
    const FockBasis basis(w, 400);
    REQUIRE(basis.eval(400, Complex(1e-8, 0)) == Complex(0, 0));
    REQUIRE(std::isfinite(std::abs(basis.eval(400, Complex(25, 0)))));
}
