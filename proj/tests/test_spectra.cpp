#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fhl/spectra.hpp"
#include "oracles.hpp"

using namespace fhl;
using namespace fhl::spectra;

namespace {

HermitianMatrix random_hermitian(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    auto draw = [&] { return scale * (2.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.0); };
    HermitianMatrix h(n);
    for (std::size_t j = 0; j < n; ++j) {
        h.set(j, j, Complex(draw(), 0));
        for (std::size_t k = j + 1; k < n; ++k) h.set(j, k, Complex(draw(), draw()));
    }
    return h;
}

} // namespace

TEST_CASE("fixed small spectra") {
    SECTION("diagonal") {
        HermitianMatrix h(2);
        h.set(0, 0, {1, 0});
        h.set(1, 1, {2, 0});
        const auto eig = jacobi_eigen(h);
        REQUIRE(std::abs(eig.values[0] - 2.0) <= 1e-14);
        REQUIRE(std::abs(eig.values[1] - 1.0) <= 1e-14);
    }
    SECTION("real symmetric [[2,1],[1,2]] -> {3,1}") {
        HermitianMatrix h(2);
        h.set(0, 0, {2, 0});
        h.set(1, 1, {2, 0});
        h.set(0, 1, {1, 0});
        const auto eig = jacobi_eigen(h);
        REQUIRE(std::abs(eig.values[0] - 3.0) <= 1e-13);
        REQUIRE(std::abs(eig.values[1] - 1.0) <= 1e-13);
    }
    SECTION("complex [[1,i],[-i,1]] -> {2,0}") {
        HermitianMatrix h(2);
        h.set(0, 0, {1, 0});
        h.set(1, 1, {1, 0});
        h.set(0, 1, {0, 1});
        const auto eig = jacobi_eigen(h);
        REQUIRE(std::abs(eig.values[0] - 2.0) <= 1e-13);
        REQUIRE(std::abs(eig.values[1] - 0.0) <= 1e-13);
    }
}

TEST_CASE("agreement with characteristic-polynomial roots") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        auto draw = [&] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.0; };
        SECTION("2x2 trial " + std::to_string(trial)) {}
        {
            const double a = draw(), d = draw();
            const Complex b(draw(), draw());
            HermitianMatrix h(2);
            h.set(0, 0, {a, 0});
            h.set(1, 1, {d, 0});
            h.set(0, 1, b);
            const auto eig = jacobi_eigen(h);
            const auto expected = oracle::herm2_eigen(a, b, d);
            REQUIRE(std::abs(eig.values[0] - expected[0]) <= 1e-10);
            REQUIRE(std::abs(eig.values[1] - expected[1]) <= 1e-10);
        }
        {
            const double a = draw(), d = draw(), f = draw();
            const Complex b(draw(), draw()), c(draw(), draw()), e(draw(), draw());
            HermitianMatrix h(3);
            h.set(0, 0, {a, 0});
            h.set(1, 1, {d, 0});
            h.set(2, 2, {f, 0});
            h.set(0, 1, b);
            h.set(0, 2, c);
            h.set(1, 2, e);
            const auto eig = jacobi_eigen(h);
            const auto expected = oracle::herm3_eigen(a, d, f, b, c, e);
            for (int i = 0; i < 3; ++i)
                REQUIRE(std::abs(eig.values[i] - expected[i]) <= 1e-10);
        }
    }
}

TEST_CASE("trace and Frobenius norm are preserved") {
    std::mt19937_64 rng(1234);
    for (std::size_t n : {4u, 16u, 40u}) {
        const HermitianMatrix h = random_hermitian(rng, n);
        const double tr = h.trace();
        const double fro = h.frobenius();
        const auto eig = jacobi_eigen(h);
        double tr_sum = 0.0, fro_sum = 0.0;
        for (double v : eig.values) {
            tr_sum += v;
            fro_sum += v * v;
        }
        REQUIRE(std::abs(tr_sum - tr) <= 1e-10 * std::max(1.0, fro));
        REQUIRE(std::abs(std::sqrt(fro_sum) - fro) <= 1e-10 * std::max(1.0, fro));
    }
}

TEST_CASE("shifting by the identity shifts the spectrum") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 15);
        HermitianMatrix h = random_hermitian(rng, n);
        const double shift = 3.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.5;
        HermitianMatrix shifted = h;
        for (std::size_t j = 0; j < n; ++j)
            shifted.set(j, j, h.at(j, j) + Complex(shift, 0));
        const auto base = jacobi_eigen(h);
        const auto moved = jacobi_eigen(shifted);
        for (std::size_t j = 0; j < n; ++j)
            REQUIRE(std::abs(moved.values[j] - base.values[j] - shift) <= 1e-9);
    }
}

TEST_CASE("eigenvectors reconstruct the matrix when requested") {
    std::mt19937_64 rng(5);
    const std::size_t n = 12;
    const HermitianMatrix h = random_hermitian(rng, n);
    JacobiOptions opts;
    opts.want_vectors = true;
    const auto eig = jacobi_eigen(h, opts);
    REQUIRE(eig.vectors.has_value());
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            Complex sum(0, 0);
            for (std::size_t l = 0; l < n; ++l)
                sum += eig.vectors->at(j, l) * eig.values[l] * std::conj(eig.vectors->at(k, l));
            worst = std::max(worst, std::abs(sum - h.at(j, k)));
        }
    REQUIRE(worst <= 1e-11);
}

TEST_CASE("psd clipping") {
    REQUIRE(psd_clip({1.0, -1e-12}, 1e-8) == std::vector<double>{1.0, 0.0});
    REQUIRE(psd_clip({4.0, 1.0, 0.0}, 1e-8) == std::vector<double>{4.0, 1.0, 0.0});
    REQUIRE_THROWS_AS(psd_clip({-1e-3}, 1e-8), NumericalInconsistencyError);
}

TEST_CASE("singular values from a normal matrix") {
    SECTION("zero matrix") {
        HermitianMatrix h(3);
        const auto spec = singular_values_from_normal(h);
        for (double s : spec.values) REQUIRE(s == 0.0);
    }
    SECTION("diag(4,1) -> {2,1}") {
        HermitianMatrix h(2);
        h.set(0, 0, {4, 0});
        h.set(1, 1, {1, 0});
        const auto spec = singular_values_from_normal(h);
        REQUIRE(std::abs(spec.values[0] - 2.0) <= 1e-13);
        REQUIRE(std::abs(spec.values[1] - 1.0) <= 1e-13);
    }
}

TEST_CASE("hermitian solve inverts well-conditioned systems") {
    std::mt19937_64 rng(77);
    const std::size_t n = 9;
    auto draw = [&] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.0; };
    // build a PD matrix as G = C^H C + I
    ComplexMatrix c(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) c.at(j, k) = Complex(draw(), draw());
    ComplexMatrix g = adjoint_product(c);
    for (std::size_t j = 0; j < n; ++j) g.at(j, j) += Complex(1, 0);
    HermitianMatrix gh = HermitianMatrix::from_matrix(g);
    std::vector<Complex> x(n);
    for (auto& v : x) v = Complex(draw(), draw());
    std::vector<Complex> b(n, Complex(0, 0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) b[j] += gh.at(j, k) * x[k];
    const auto solved = hermitian_solve(gh, b);
    for (std::size_t j = 0; j < n; ++j) REQUIRE(std::abs(solved[j] - x[j]) <= 1e-10);
}

TEST_CASE("non-convergence surfaces as an error with the residual") {
    HermitianMatrix h(3);
    h.set(0, 0, {1, 0});
    h.set(1, 1, {2, 0});
    h.set(0, 1, {0.5, 0.25});
    JacobiOptions opts;
    opts.max_sweeps = 0;
    REQUIRE_THROWS_AS(jacobi_eigen(h, opts), ConvergenceError);
}
