#pragma once
//
// fhl/spectra.hpp
//
// Self-contained dense Hermitian eigensolver (cyclic complex Jacobi) and
// spectrum utilities. No external linear algebra.
//

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "fhl/common.hpp"
#include "fhl/errors.hpp"

namespace fhl::spectra {

inline constexpr int kMaxEigenOrder = 4096;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex(0, 0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Complex& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    double frobenius() const {
        double s = 0.0;
        for (const Complex& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }
    double max_abs() const {
        double s = 0.0;
        for (const Complex& v : a_) s = std::max(s, std::abs(v));
        return s;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> a_;
};

// A^H A (cols x cols, Hermitian by construction)
inline ComplexMatrix adjoint_product(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Complex s(0, 0);
            for (std::size_t m = 0; m < a.rows(); ++m)
                s += std::conj(a.at(m, j)) * a.at(m, k);
            out.at(j, k) = s;
        }
    return out;
}

class HermitianMatrix {
public:
    explicit HermitianMatrix(std::size_t order) : n_(order), a_(order * order, Complex(0, 0)) {
        if (order == 0 || order > kMaxEigenOrder)
            throw UsageError("HermitianMatrix: order out of range");
    }

    // symmetrizes (A + A^H)/2; rejects non-finite input
    static HermitianMatrix from_matrix(const ComplexMatrix& m) {
        if (m.rows() != m.cols()) throw UsageError("HermitianMatrix: matrix not square");
        HermitianMatrix h(m.rows());
        for (std::size_t j = 0; j < m.rows(); ++j)
            for (std::size_t k = 0; k < m.cols(); ++k) {
                const Complex v = 0.5 * (m.at(j, k) + std::conj(m.at(k, j)));
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw NumericalError("HermitianMatrix: non-finite entry");
                h.a_[j * m.rows() + k] = j == k ? Complex(v.real(), 0.0) : v;
            }
        return h;
    }

    std::size_t order() const { return n_; }
    Complex& at(std::size_t j, std::size_t k) { return a_[j * n_ + k]; }
    const Complex& at(std::size_t j, std::size_t k) const { return a_[j * n_ + k]; }

    // sets both (j,k) and its mirror
    void set(std::size_t j, std::size_t k, Complex v) {
        a_[j * n_ + k] = v;
        a_[k * n_ + j] = std::conj(v);
        if (j == k) a_[j * n_ + j] = Complex(v.real(), 0.0);
    }

    double trace() const {
        double t = 0.0;
        for (std::size_t j = 0; j < n_; ++j) t += a_[j * n_ + j].real();
        return t;
    }
    double frobenius() const {
        double s = 0.0;
        for (const Complex& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }
    double off_diagonal_frobenius() const {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t k = 0; k < n_; ++k)
                if (j != k) s += std::norm(a_[j * n_ + k]);
        return std::sqrt(s);
    }
    // max |A - A^H| entry before symmetrization would apply
    double hermitian_defect() const {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t k = j; k < n_; ++k)
                s = std::max(s, std::abs(a_[j * n_ + k] - std::conj(a_[k * n_ + j])));
        return s;
    }

private:
    std::size_t n_;
    std::vector<Complex> a_;
};

struct JacobiOptions {
    double tol = 1e-13;   // off-diagonal Frobenius relative to ||A||_F
    int max_sweeps = 60;
    bool want_vectors = false;
};

struct EigenResult {
    std::vector<double> values; // sorted nonincreasing
    std::optional<ComplexMatrix> vectors; // columns matching `values`
    int sweeps = 0;
    double off_residual = 0.0;
};

// Cyclic-by-row complex Jacobi. Each rotation zeroes one off-diagonal pair
// with a phase + angle rotation; diagonal stays real throughout.
inline EigenResult jacobi_eigen(HermitianMatrix a, const JacobiOptions& opts = {}) {
    const std::size_t n = a.order();
    const double norm = a.frobenius();
    const double target = opts.tol * std::max(norm, 1e-300);

    ComplexMatrix v;
    if (opts.want_vectors) {
        v = ComplexMatrix(n, n);
        for (std::size_t i = 0; i < n; ++i) v.at(i, i) = Complex(1, 0);
    }

    EigenResult result;
    double off = a.off_diagonal_frobenius();
    int sweep = 0;
    while (off > target) {
        if (sweep++ >= opts.max_sweeps)
            throw ConvergenceError("jacobi_eigen: no convergence after "
                                   + std::to_string(opts.max_sweeps) + " sweeps", off);
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a.at(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                const Complex phase = apq / mag;
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0 ? 1.0 : -1.0)
                                 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const Complex s = t * c * phase; // G = [[c, s], [-conj(s), c]]

                for (std::size_t i = 0; i < n; ++i) {
                    const Complex aip = a.at(i, p);
                    const Complex aiq = a.at(i, q);
                    a.at(i, p) = c * aip - std::conj(s) * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex apj = a.at(p, j);
                    const Complex aqj = a.at(q, j);
                    a.at(p, j) = c * apj - s * aqj;
                    a.at(q, j) = std::conj(s) * apj + c * aqj;
                }
                a.at(p, p) = Complex(a.at(p, p).real(), 0.0);
                a.at(q, q) = Complex(a.at(q, q).real(), 0.0);
                a.at(p, q) = Complex(0, 0);
                a.at(q, p) = Complex(0, 0);

                if (opts.want_vectors) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const Complex vip = v.at(i, p);
                        const Complex viq = v.at(i, q);
                        v.at(i, p) = c * vip - std::conj(s) * viq;
                        v.at(i, q) = s * vip + c * viq;
                    }
                }
            }
        }
        off = a.off_diagonal_frobenius();
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a.at(i, i).real();
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

    result.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.values[i] = diag[order[i]];
    if (opts.want_vectors) {
        ComplexMatrix sorted(n, n);
        for (std::size_t col = 0; col < n; ++col)
            for (std::size_t row = 0; row < n; ++row)
                sorted.at(row, col) = v.at(row, order[col]);
        result.vectors = std::move(sorted);
    }
    result.sweeps = sweep;
    result.off_residual = off;
    return result;
}

// values in (-tol, 0) snap to zero; anything <= -tol is a real inconsistency
inline std::vector<double> psd_clip(std::vector<double> values, double tol) {
    for (double& v : values) {
        if (v < 0.0) {
            if (v <= -tol)
                throw NumericalInconsistencyError(
                    "psd_clip: eigenvalue " + std::to_string(v)
                    + " below -tol; projection truncation too small?");
            v = 0.0;
        }
    }
    return values;
}

struct SingularSpectrum {
    std::vector<double> values;       // sorted nonincreasing
    std::vector<double> mode_indexed; // per-mode values when the source is mode-resolved
    int domain_truncation = -1;
    int projection_truncation = -1;
    double clip_tol = 0.0;
};

// s_j = sqrt(lambda_j) of a PSD normal matrix
inline SingularSpectrum singular_values_from_normal(const HermitianMatrix& mat,
                                                    double clip_tol = 1e-8) {
    EigenResult eig = jacobi_eigen(mat);
    std::vector<double> vals = psd_clip(std::move(eig.values), clip_tol);
    SingularSpectrum out;
    out.values.resize(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) out.values[i] = std::sqrt(vals[i]);
    out.clip_tol = clip_tol;
    return out;
}

// Hermitian positive definite solve (Cholesky), used by small least-squares
// systems; adds a relative ridge when the pivot degenerates.
inline std::vector<Complex> hermitian_solve(HermitianMatrix g, std::vector<Complex> b) {
    const std::size_t n = g.order();
    if (b.size() != n) throw UsageError("hermitian_solve: size mismatch");
    const double ridge = 1e-14 * std::max(g.trace() / n, 1e-300);
    for (std::size_t j = 0; j < n; ++j) {
        double d = g.at(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(g.at(j, k));
        if (d <= 0.0) d = ridge;
        d = std::sqrt(d);
        g.at(j, j) = Complex(d, 0.0);
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex s = g.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= g.at(i, k) * std::conj(g.at(j, k));
            g.at(i, j) = s / d;
        }
    }
    // forward then backward substitution with L and L^H
    for (std::size_t i = 0; i < n; ++i) {
        Complex s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= g.at(i, k) * b[k];
        b[i] = s / g.at(i, i).real();
    }
    for (std::size_t ii = n; ii-- > 0;) {
        Complex s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(g.at(k, ii)) * b[k];
        b[ii] = s / g.at(ii, ii).real();
    }
    return b;
}

} // namespace fhl::spectra
