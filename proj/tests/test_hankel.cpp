#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fhl/hankel.hpp"
#include "oracles.hpp"

using namespace fhl;
using namespace fhl::hankel;
using fhl::fock::FockBasis;
using fhl::fock::RadialWeight;
using fhl::symbols::Symbol;
using fhl::symbols::parse_symbol;

namespace {

FockBasis classical_basis(int n) { return FockBasis(RadialWeight::classical(), n); }

} // namespace

TEST_CASE("cross matrix of the multiplication by z") {
    // z e_k = sqrt(k+1) e_{k+1} on the classical space
    const auto model = HankelModel::make(classical_basis(40), parse_symbol("poly(0,1)"), 8);
    const auto a = cross_matrix(model);
    for (std::size_t m = 0; m < a.rows(); ++m)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double expected = (m == k + 1) ? std::sqrt(k + 1.0) : 0.0;
            REQUIRE(std::abs(a.at(m, k) - Complex(expected, 0)) <= 1e-9 * (1.0 + expected));
        }
}

TEST_CASE("cross matrix of the counterexample symbol") {
    const auto model = HankelModel::make(classical_basis(40), Symbol::xia(), 6);
    const auto a = cross_matrix(model);
    // support on m = k - 1 with value Gamma(k,1)/sqrt(k!(k-1)!)
    double offband = 0.0;
    for (std::size_t m = 0; m < a.rows(); ++m)
        for (std::size_t k = 0; k < a.cols(); ++k)
            if (m + 1 != k) offband = std::max(offband, std::abs(a.at(m, k)));
    REQUIRE(offband <= 1e-12);
    REQUIRE(std::abs(a.at(0, 1) - Complex(std::exp(-1.0), 0)) <= 1e-10);
    double factk = 1.0, factkm1 = 1.0;
    for (int k = 1; k <= 6; ++k) {
        factkm1 = factk;
        factk *= k;
        const double expected = oracle::upper_gamma_at_one(k) / std::sqrt(factk * factkm1);
        REQUIRE(std::abs(a.at(k - 1, k) - Complex(expected, 0)) <= 1e-10);
    }
}

TEST_CASE("zero symbol gives a zero cross matrix") {
    const auto model = HankelModel::make(classical_basis(30), parse_symbol("poly(0)"), 4);
    REQUIRE(cross_matrix(model).max_abs() == 0.0);
    REQUIRE(gram_matrix(model).max_abs() == 0.0);
    REQUIRE(hs_norm_direct(model) == 0.0);
}

TEST_CASE("gram matrix fixtures") {
    SECTION("f = 1 is the identity") {
        const auto model = HankelModel::make(classical_basis(30), parse_symbol("poly(1)"), 6);
        const auto b = gram_matrix(model);
        for (std::size_t j = 0; j < b.rows(); ++j)
            for (std::size_t k = 0; k < b.cols(); ++k)
                REQUIRE(std::abs(b.at(j, k) - (j == k ? Complex(1, 0) : Complex(0, 0))) <= 1e-9);
    }
    SECTION("counterexample diagonal is Gamma(k,1)/k!") {
        const auto model = HankelModel::make(classical_basis(40), Symbol::xia(), 6);
        const auto b = gram_matrix(model);
        REQUIRE(std::abs(b.at(0, 0) - Complex(oracle::exponential_integral_one(), 0)) <= 1e-10);
        double fact = 1.0;
        for (int k = 1; k <= 6; ++k) {
            fact *= k;
            const double expected = oracle::upper_gamma_at_one(k) / fact;
            REQUIRE(std::abs(b.at(k, k) - Complex(expected, 0)) <= 1e-10);
        }
        double offdiag = 0.0;
        for (std::size_t j = 0; j < b.rows(); ++j)
            for (std::size_t k = 0; k < b.cols(); ++k)
                if (j != k) offdiag = std::max(offdiag, std::abs(b.at(j, k)));
        REQUIRE(offdiag <= 1e-12);
    }
    SECTION("f = z has diagonal k+1") {
        const auto model = HankelModel::make(classical_basis(40), parse_symbol("poly(0,1)"), 6);
        const auto b = gram_matrix(model);
        for (int k = 0; k <= 6; ++k)
            REQUIRE(std::abs(b.at(k, k) - Complex(k + 1.0, 0)) <= 1e-9 * (k + 1.0));
    }
}

TEST_CASE("normal matrix of analytic symbols vanishes") {
    for (const char* text : {"poly(0,1)", "poly(1,1)", "poly(0,0,1)"}) {
        const auto sym = parse_symbol(text);
        const auto model = HankelModel::make(classical_basis(40), sym, 10);
        const auto h = normal_matrix(model);
        double worst = 0.0;
        for (std::size_t j = 0; j < h.order(); ++j)
            for (std::size_t k = 0; k < h.order(); ++k)
                worst = std::max(worst, std::abs(h.at(j, k)));
        REQUIRE(worst <= 1e-9);
    }
}

TEST_CASE("Bessel inequality for cross-matrix columns") {
    for (const char* text : {"xia", "conj(xia)", "poly(0,1)", "indicator(1)"}) {
        const auto model = HankelModel::make(classical_basis(44), parse_symbol(text), 8);
        const auto a = cross_matrix(model);
        const auto b = gram_matrix(model);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double col = 0.0;
            for (std::size_t m = 0; m < a.rows(); ++m) col += std::norm(a.at(m, k));
            REQUIRE(col <= b.at(k, k).real() + 1e-9);
        }
    }
}

TEST_CASE("conjugating the symbol mirrors the band structure") {
    const auto f = Symbol::xia();
    const auto mf = HankelModel::make(classical_basis(40), f, 6);
    const auto mc = HankelModel::make(classical_basis(40), Symbol::conjugate(f), 6);
    const auto af = cross_matrix(mf);
    const auto ac = cross_matrix(mc);
    // f sits on m = k - 1, conj f on m = k + 1
    for (std::size_t m = 0; m < ac.rows(); ++m)
        for (std::size_t k = 0; k < ac.cols(); ++k)
            if (m != k + 1) REQUIRE(std::abs(ac.at(m, k)) <= 1e-12);
    for (std::size_t k = 1; k < af.cols(); ++k)
        REQUIRE(std::abs(af.at(k - 1, k)) > 1e-3);
}

TEST_CASE("single-frequency spectrum closed forms") {
    const FockBasis basis = classical_basis(420);
    const double e1 = oracle::exponential_integral_one();

    SECTION("counterexample, mode 0: sqrt(E1(1))") {
        const auto spec = single_frequency_spectrum(Symbol::xia(), basis, 4);
        REQUIRE(std::abs(spec.mode_indexed[0] - std::sqrt(e1)) <= 1e-10);
        REQUIRE(std::abs(spec.mode_indexed[0] - 0.46838) <= 1e-4);
    }
    SECTION("counterexample, mode 1: sqrt(e^{-1} - e^{-2})") {
        const auto spec = single_frequency_spectrum(Symbol::xia(), basis, 4);
        const double expected = std::sqrt(std::exp(-1.0) - std::exp(-2.0));
        REQUIRE(std::abs(spec.mode_indexed[1] - expected) <= 1e-10);
        REQUIRE(std::abs(spec.mode_indexed[1] - 0.48223) <= 1e-4);
    }
    SECTION("conjugate, mode 0: sqrt(E1(1) - e^{-2})") {
        const auto spec =
            single_frequency_spectrum(Symbol::conjugate(Symbol::xia()), basis, 4);
        const double expected = std::sqrt(e1 - std::exp(-2.0));
        REQUIRE(std::abs(spec.mode_indexed[0] - expected) <= 1e-10);
        REQUIRE(std::abs(spec.mode_indexed[0] - 0.28991) <= 1e-4);
    }
    SECTION("general modes match the incomplete-gamma closed form") {
        // s_k^2 = Q(k)/k - Q(k+1)^2/(k+1) for the conjugate symbol
        const auto spec =
            single_frequency_spectrum(Symbol::conjugate(Symbol::xia()), basis, 24);
        for (int k = 1; k <= 24; ++k) {
            const double qk = oracle::regularized_upper_gamma_at_one(k);
            const double qk1 = oracle::regularized_upper_gamma_at_one(k + 1);
            const double expected = std::sqrt(qk / k - qk1 * qk1 / (k + 1));
            REQUIRE(std::abs(spec.mode_indexed[k] - expected) <= 1e-9);
        }
    }
    SECTION("conjugate modes approach s_k ~ 1/k") {
        const auto spec =
            single_frequency_spectrum(Symbol::conjugate(Symbol::xia()), basis, 400);
        for (int k = 200; k <= 400; k += 25) {
            const double scaled = k * spec.mode_indexed[k];
            REQUIRE(scaled >= 0.9);
            REQUIRE(scaled <= 1.1);
        }
    }
    SECTION("requesting more modes than the basis holds fails") {
        REQUIRE_THROWS_AS(
            single_frequency_spectrum(Symbol::conjugate(Symbol::xia()), basis, 420),
            TruncationError);
    }
}

TEST_CASE("dense path agrees with the single-frequency path") {
    const int n = 24, m = 40;
    const FockBasis basis = classical_basis(m + 2);
    for (const char* text : {"xia", "conj(xia)"}) {
        const auto sym = parse_symbol(text);
        const auto model = HankelModel::make(basis, sym, n, m);
        const auto dense = spectra::singular_values_from_normal(normal_matrix(model));
        const auto closed = single_frequency_spectrum(sym, basis, n);
        REQUIRE(dense.values.size() == closed.values.size());
        for (std::size_t j = 0; j < dense.values.size(); ++j)
            REQUIRE(std::abs(dense.values[j] - closed.values[j]) <= 1e-6);
    }
}

TEST_CASE("raising the projection truncation never raises a singular value") {
    const int n = 16;
    const FockBasis basis = classical_basis(64);
    for (const char* text : {"xia", "conj(xia)"}) {
        const auto sym = parse_symbol(text);
        // same grid for both truncations so only the captured rows differ
        const auto big = HankelModel::make(basis, sym, n, n + 14);
        const HankelModel small{basis, sym, n, n + 4, big.grid};
        const auto lo = spectra::singular_values_from_normal(normal_matrix(small));
        const auto hi = spectra::singular_values_from_normal(normal_matrix(big));
        for (std::size_t j = 0; j < lo.values.size(); ++j)
            REQUIRE(hi.values[j] <= lo.values[j] + 1e-9);
    }
}

TEST_CASE("Hilbert-Schmidt norm matches the spectrum sum") {
    const int n = 20;
    const FockBasis basis = classical_basis(60);
    const auto sym = Symbol::xia();
    const auto model = HankelModel::make(basis, sym, n);
    const double direct = hs_norm_direct(model);
    const auto spec = single_frequency_spectrum(sym, basis, n);
    double sum2 = 0.0;
    for (double s : spec.values) sum2 += s * s;
    REQUIRE(std::abs(direct - std::sqrt(sum2)) <= 1e-7);

    // analytic polynomial: the Hankel section vanishes
    const auto poly_model = HankelModel::make(basis, parse_symbol("poly(2,1)"), 10);
    REQUIRE(hs_norm_direct(poly_model) <= 1e-9);
}

TEST_CASE("model construction guards its truncations") {
    const FockBasis basis = classical_basis(20);
    REQUIRE_THROWS_AS(HankelModel::make(basis, Symbol::xia(), 8, 30), TruncationError);
    REQUIRE_THROWS_AS(HankelModel::make(basis, Symbol::xia(), 8, 4), UsageError);
    // the default projection truncation must fit the basis
    REQUIRE_THROWS_AS(HankelModel::make(basis, Symbol::xia(), 10), TruncationError);
    REQUIRE_NOTHROW(HankelModel::make(basis, Symbol::xia(), 3));
}

TEST_CASE("partial Schatten sums") {
    spectra::SingularSpectrum spec;
    for (int j = 0; j < 40; ++j) spec.values.push_back(std::pow(0.5, j));
    SECTION("geometric series at p = 1 approaches 2") {
        REQUIRE(std::abs(schatten_partial(spec, 1.0, 40) - 2.0) <= 1e-10);
    }
    SECTION("monotone in the truncation count") {
        double prev = 0.0;
        for (std::size_t k = 1; k <= 40; ++k) {
            const double cur = schatten_partial(spec, 0.7, k);
            REQUIRE(cur >= prev);
            prev = cur;
        }
    }
    SECTION("count beyond the spectrum length fails") {
        REQUIRE_THROWS_AS(schatten_partial(spec, 1.0, 41), TruncationError);
    }
}

TEST_CASE("counterexample Schatten tail is negligible while the conjugate diverges") {
    const FockBasis basis = classical_basis(420);
    const auto f_spec = single_frequency_spectrum(Symbol::xia(), basis, 400);
    const double at50 = schatten_partial(f_spec, 1.0, 50);
    const double at400 = schatten_partial(f_spec, 1.0, 400);
    REQUIRE(at400 - at50 <= 1e-6);

    const auto c_spec =
        single_frequency_spectrum(Symbol::conjugate(Symbol::xia()), basis, 400);
    const double inc = schatten_partial(c_spec, 1.0, 400) - schatten_partial(c_spec, 1.0, 200);
    REQUIRE(inc >= 0.62);
    REQUIRE(inc <= 0.77);
}
