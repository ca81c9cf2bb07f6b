#pragma once
//
// fhl/fock.hpp
//
// Radial weights phi with curvature bounds m <= lap(phi) <= M, the
// orthonormal monomial basis e_k(z) = z^k / sqrt(c_k) of the weighted
// space of entire functions, reproducing kernel sums and projection
// coefficients. All monomial norms c_k live in the log domain; linear
// values appear only in final combinations.
//

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "fhl/common.hpp"
#include "fhl/errors.hpp"
#include "fhl/quadrature.hpp"

namespace fhl::fock {

inline constexpr int kMaxMonomialDegree = 4096;

class RadialWeight {
public:
    // phi(z) = alpha |z|^2, laplacian identically 4 alpha
    static RadialWeight gaussian(double alpha) {
        if (!(alpha > 0)) throw InvalidWeightError("gaussian weight needs alpha > 0");
        RadialWeight w;
        w.gaussian_ = true;
        w.alpha_ = alpha;
        w.m_ = w.M_ = 4.0 * alpha;
        return w;
    }

    // e^{-2 phi} = e^{-|z|^2}, the measure of the classical one-variable space
    static RadialWeight classical() { return gaussian(0.5); }

    // smooth callables with an analytically supplied Laplacian; admissibility
    // (m <= lap <= M on a sample grid) is verified here, it cannot be derived
    static RadialWeight custom(std::function<double(double)> phi,
                               std::function<double(double)> laplacian,
                               double m, double M) {
        if (!(m > 0) || !(M >= m))
            throw InvalidWeightError("custom weight needs 0 < m <= M");
        RadialWeight w;
        w.gaussian_ = false;
        w.phi_ = std::move(phi);
        w.lap_ = std::move(laplacian);
        w.m_ = m;
        w.M_ = M;
        w.validate();
        return w;
    }

    double phi(double rho) const {
        return gaussian_ ? alpha_ * rho * rho : phi_(rho);
    }
    double laplacian(double rho) const {
        return gaussian_ ? 4.0 * alpha_ : lap_(rho);
    }
    double lower_curvature() const { return m_; }
    double upper_curvature() const { return M_; }
    bool is_gaussian() const { return gaussian_; }
    double alpha() const { return alpha_; }

    // default plane truncation: e^{-2 phi} tail negligible past here
    double truncation_radius() const { return std::sqrt(20.0 / m_) + 2.0; }

    // covers the mass of rho^{2k+1} e^{-2 phi}, whose peak sits left of
    // sqrt((2k+1)/m), plus a curvature-scaled tail margin
    double truncation_radius_for_degree(int k) const {
        return std::sqrt((2.0 * k + 1.0) / m_) + std::sqrt(160.0 / m_) + 2.0;
    }

    void validate(double rho_max = 0.0) const {
        if (gaussian_) return;
        if (rho_max <= 0.0) rho_max = truncation_radius_for_degree(64);
        if (!std::isfinite(phi(0.0)))
            throw InvalidWeightError("weight profile must be finite at 0");
        const int samples = 512;
        const double slack = 1e-9 * (1.0 + std::abs(M_));
        for (int i = 0; i <= samples; ++i) {
            const double rho = rho_max * i / samples;
            const double lap = laplacian(rho);
            if (!std::isfinite(lap) || lap < m_ - slack || lap > M_ + slack)
                throw InvalidWeightError("laplacian leaves [m, M] at rho = "
                                         + std::to_string(rho));
        }
    }

private:
    RadialWeight() = default;
    bool gaussian_ = true;
    double alpha_ = 0.5;
    double m_ = 2.0, M_ = 2.0;
    std::function<double(double)> phi_, lap_;
};

namespace detail {

// log of 2 pi * integral of rho^{2k+1} e^{-2 phi} g(rho) over [lo, hi],
// streaming log-sum-exp over composite Gauss-Legendre panels
template <class G>
double log_radial_integral(const RadialWeight& w, double power, double lo, double hi,
                           const G& extra_log, int gauss_order, double panel_width) {
    const quadrature::GaussRule& rule = quadrature::gauss_legendre(gauss_order);
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width)));
    const double h = (hi - lo) / panels;
    double maxlog = -std::numeric_limits<double>::infinity();
    double scaled = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * h, half = 0.5 * h;
        for (int g = 0; g < gauss_order; ++g) {
            const double rho = mid + half * rule.nodes[g];
            if (rho <= 0.0) continue;
            const double extra = extra_log(rho);
            if (extra == -std::numeric_limits<double>::infinity()) continue;
            const double l = power * std::log(rho) - 2.0 * w.phi(rho) + extra
                             + std::log(half * rule.weights[g]);
            if (l > maxlog) {
                scaled = scaled * std::exp(maxlog - l) + 1.0;
                maxlog = l;
            } else {
                scaled += std::exp(l - maxlog);
            }
        }
    }
    if (!(scaled > 0.0)) throw InvalidWeightError("radial integral vanished");
    return maxlog + std::log(scaled) + std::log(kTwoPi);
}

} // namespace detail

// log c_k with c_k = 2 pi int rho^{2k+1} e^{-2 phi} d rho
inline double log_monomial_norm(const RadialWeight& w, int k, int gauss_order = 16) {
    if (k < 0 || k > kMaxMonomialDegree)
        throw TruncationError("monomial degree out of range: " + std::to_string(k));
    const double hi = w.truncation_radius_for_degree(k);
    const double width = std::min(0.5, 2.0 / std::sqrt(w.lower_curvature()));
    return detail::log_radial_integral(
        w, 2.0 * k + 1.0, 0.0, hi, [](double) { return 0.0; }, gauss_order, width);
}

// linear-scale c_k; overflows to +inf once k! outgrows double range
inline double monomial_norm(const RadialWeight& w, int k) {
    return std::exp(log_monomial_norm(w, k));
}

class FockBasis {
public:
    FockBasis(RadialWeight weight, int max_degree)
        : weight_(std::move(weight)), nmax_(max_degree) {
        if (max_degree < 0 || max_degree > kMaxMonomialDegree)
            throw TruncationError("basis truncation out of range");
        logc_.resize(nmax_ + 1);
        for (int k = 0; k <= nmax_; ++k) logc_[k] = log_monomial_norm(weight_, k);
        step_.resize(nmax_);
        for (int k = 0; k < nmax_; ++k) step_[k] = std::exp(0.5 * (logc_[k] - logc_[k + 1]));
    }

    const RadialWeight& weight() const { return weight_; }
    int max_degree() const { return nmax_; }

    double log_norm(int k) const {
        check(k);
        return logc_[k];
    }
    double norm(int k) const { return std::exp(log_norm(k)); }

    // e_k(z) = z^k / sqrt(c_k); underflow degrades gracefully to 0
    Complex eval(int k, Complex z) const {
        check(k);
        if (k == 0) return Complex(std::exp(-0.5 * logc_[0]), 0.0);
        const double rho = std::abs(z);
        if (rho == 0.0) return {0.0, 0.0};
        return std::polar(std::exp(k * std::log(rho) - 0.5 * logc_[k]), k * std::arg(z));
    }

    // e_0(z) .. e_{K}(z) by the stable ratio recurrence
    void eval_all(Complex z, std::span<Complex> out) const {
        if (out.empty()) return;
        check(static_cast<int>(out.size()) - 1);
        out[0] = Complex(std::exp(-0.5 * logc_[0]), 0.0);
        for (std::size_t k = 1; k < out.size(); ++k)
            out[k] = out[k - 1] * z * step_[k - 1];
    }

    // truncated kernel sum_{k <= terms} e_k(w) conj(e_k(z))
    Complex kernel(Complex w, Complex z, int terms) const {
        check(terms);
        std::vector<Complex> ew(terms + 1), ez(terms + 1);
        eval_all(w, ew);
        eval_all(z, ez);
        fhl::detail::KahanComplexSum sum;
        for (int k = 0; k <= terms; ++k) sum.add(ew[k] * std::conj(ez[k]));
        return sum.value();
    }

    // coefficients <fn, e_m> for m = 0..M under the supplied plane grid
    template <class F>
    std::vector<Complex> project(F&& fn, int M, const quadrature::PolarGrid& grid) const {
        check(M);
        std::vector<fhl::detail::KahanComplexSum> acc(M + 1);
        std::vector<Complex> e(M + 1);
        grid.for_each_node([&](Complex u, double wq) {
            const Complex f = fn(u);
            if (!std::isfinite(f.real()) || !std::isfinite(f.imag()))
                throw EvaluationError("project: non-finite symbol value", u);
            const double mass = wq * std::exp(-2.0 * weight_.phi(std::abs(u)));
            eval_all(u, e);
            for (int m = 0; m <= M; ++m) acc[m].add(f * std::conj(e[m]) * mass);
        });
        std::vector<Complex> coeffs(M + 1);
        for (int m = 0; m <= M; ++m) coeffs[m] = acc[m].value();
        return coeffs;
    }

    // plane grid big enough for monomials up to the given degree
    quadrature::PolarGrid plane_grid(int degree, std::vector<double> extra_breaks = {},
                                     int n_theta = 0, int gauss_order = 12) const {
        quadrature::GridOptions opts;
        opts.gauss_order = gauss_order;
        opts.n_theta = n_theta > 0 ? n_theta : std::max(64, 2 * degree + 32);
        opts.break_radii = std::move(extra_breaks);
        return quadrature::PolarGrid::plane(weight_.truncation_radius_for_degree(degree), opts);
    }

private:
    void check(int k) const {
        if (k < 0 || k > nmax_)
            throw TruncationError("basis index " + std::to_string(k) + " exceeds truncation "
                                  + std::to_string(nmax_));
    }

    RadialWeight weight_;
    int nmax_;
    std::vector<double> logc_;
    std::vector<double> step_;
};

} // namespace fhl::fock
