#pragma once
//
// Test-only oracles, independent of the library's quadrature and solver
// paths: an adaptive Simpson integrator, incomplete-gamma closed forms for
// integer order, and characteristic-polynomial eigenvalues for tiny
// Hermitian matrices.
//

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fm, double fb, double whole, double tol,
                           int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
           + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Gamma(k, 1) = int_1^inf s^{k-1} e^{-s} ds for integer k >= 1:
// (k-1)! e^{-1} sum_{j<k} 1/j!
inline double upper_gamma_at_one(int k) {
    if (k < 1) throw std::invalid_argument("upper_gamma_at_one needs k >= 1");
    double sum = 0.0, term = 1.0;
    for (int j = 0; j < k; ++j) {
        sum += term;           // 1/j!
        term /= (j + 1.0);
    }
    double fact = 1.0;
    for (int j = 2; j < k; ++j) fact *= j;
    return fact * std::exp(-1.0) * sum;
}

// regularized Q(k, 1) = Gamma(k,1) / (k-1)!
inline double regularized_upper_gamma_at_one(int k) {
    double sum = 0.0, term = 1.0;
    for (int j = 0; j < k; ++j) {
        sum += term;
        term /= (j + 1.0);
    }
    return std::exp(-1.0) * sum;
}

// E_1(1) = int_1^inf e^{-s}/s ds by the independent integrator
inline double exponential_integral_one() {
    return integrate([](double s) { return std::exp(-s) / s; }, 1.0, 60.0, 1e-15);
}

// eigenvalues of a 2x2 Hermitian matrix from its characteristic polynomial
inline std::vector<double> herm2_eigen(double a, std::complex<double> b, double d) {
    const double tr = a + d;
    const double det = a * d - std::norm(b);
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return {tr / 2.0 + disc, tr / 2.0 - disc};
}

// eigenvalues of a 3x3 Hermitian matrix; the characteristic polynomial has
// real coefficients, solved by the trigonometric method
inline std::vector<double> herm3_eigen(double a, double d, double f, std::complex<double> b,
                                       std::complex<double> c, std::complex<double> e) {
    // matrix [[a, b, c], [b*, d, e], [c*, e*, f]]
    const double p1 = std::norm(b) + std::norm(c) + std::norm(e);
    std::vector<double> out(3);
    if (p1 == 0.0) {
        out = {a, d, f};
    } else {
        const double q = (a + d + f) / 3.0;
        const double p2 = (a - q) * (a - q) + (d - q) * (d - q) + (f - q) * (f - q) + 2.0 * p1;
        const double p = std::sqrt(p2 / 6.0);
        // r = det((A - qI)/p) / 2
        const std::complex<double> A = a - q, D = d - q, F = f - q;
        const std::complex<double> det =
            A * (D * F - e * std::conj(e)) - b * (std::conj(b) * F - e * std::conj(c))
            + c * (std::conj(b) * std::conj(e) - D * std::conj(c));
        double r = det.real() / (2.0 * p * p * p);
        r = std::min(1.0, std::max(-1.0, r));
        const double phi = std::acos(r) / 3.0;
        out[0] = q + 2.0 * p * std::cos(phi);
        out[2] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
        out[1] = 3.0 * q - out[0] - out[2];
    }
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

} // namespace oracle
