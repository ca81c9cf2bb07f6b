#pragma once
//
// fhl/oscillation.hpp
//
// Oscillation functionals over balls B(z, r): the average, the p-mean
// oscillation MO_{p,r}, the distance-to-holomorphic functional G_{q,r},
// lattice-aggregated IDA / IMO / BMO probes with ring-wise partial sums,
// and the translated projection residual used as a compactness probe.
//

#include <algorithm>
#include <cmath>
#include <vector>

#include "fhl/common.hpp"
#include "fhl/errors.hpp"
#include "fhl/detail/sum.hpp"
#include "fhl/fock.hpp"
#include "fhl/quadrature.hpp"
#include "fhl/spectra.hpp"
#include "fhl/symbols.hpp"

namespace fhl::oscillation {

struct Params {
    double ball_radius = 1.0;    // r
    double inner_exponent = 2.0; // q for G
    double outer_exponent = 1.0; // s (IDA) or p (IMO / BMO)
    int degree = 25;             // approximating polynomial degree D
    double lattice_spacing = 0.5;
    double r_max = 8.0;
    double tol = 1e-9;
    quadrature::GridOptions grid;

    void validate() const {
        if (!(ball_radius > 0)) throw UsageError("oscillation: ball radius must be positive");
        if (degree < 0) throw UsageError("oscillation: degree must be >= 0");
        if (!(lattice_spacing > 0)) throw UsageError("oscillation: lattice spacing must be positive");
        if (!(r_max > 0)) throw UsageError("oscillation: r_max must be positive");
        if (!(tol > 0)) throw UsageError("oscillation: tol must be positive");
        if (!(outer_exponent > 0)) throw UsageError("oscillation: outer exponent must be positive");
        if (!(inner_exponent >= 1)) throw UsageError("oscillation: inner exponent must be >= 1");
    }
};

// Ball grid with radial panels split where the symbol's break circles
// |u| = c cross B(z, r); within [||z|-c|, |z|+c] the angular slices meet the
// circle, so pinning the band edges keeps panels aligned with the kinks.
inline quadrature::PolarGrid ball_grid(const symbols::Symbol& f, Complex z, double r,
                                       quadrature::GridOptions opts = {}) {
    const double dist = std::abs(z);
    for (double c : f.break_radii()) {
        const double lo = std::abs(dist - c), hi = dist + c;
        if (lo > 0 && lo < r) opts.break_radii.push_back(lo);
        if (hi > 0 && hi < r) opts.break_radii.push_back(hi);
    }
    return quadrature::PolarGrid::disk(z, r, opts);
}

// the ball average of f
inline Complex mean_avg(const symbols::Symbol& f, Complex z, double r,
                        const quadrature::GridOptions& opts = {}) {
    const auto grid = ball_grid(f, z, r, opts);
    return quadrature::integrate(grid, [&](Complex u) { return f(u); }) / grid.area();
}

// MO_{p,r}(f)(z) = ( avg |f - avg f|^p )^{1/p}, p >= 1
inline double mo(const symbols::Symbol& f, Complex z, double r, double p,
                 const quadrature::GridOptions& opts = {}) {
    if (!(p >= 1)) throw UsageError("mo: p must be >= 1");
    const auto grid = ball_grid(f, z, r, opts);
    const Complex avg = quadrature::integrate(grid, [&](Complex u) { return f(u); }) / grid.area();
    detail::KahanSum sum;
    grid.for_each_node([&](Complex u, double w) {
        const double d = std::abs(f(u) - avg);
        sum.add(w * (p == 2.0 ? d * d : std::pow(d, p)));
    });
    const double mean = std::max(0.0, sum.value() / grid.area());
    return p == 2.0 ? std::sqrt(mean) : std::pow(mean, 1.0 / p);
}

struct GResult {
    double value = 0.0;
    bool converged = true;
};

namespace detail_g {

// (w - z)^j sqrt(j+1) / r^j are orthonormal for the normalized area measure
// on B(z, r); fills p_0..p_D at a point
inline void eval_poly_basis(Complex w, Complex z, double r, int degree,
                            std::vector<Complex>& out) {
    out.resize(degree + 1);
    out[0] = Complex(1, 0);
    const Complex x = (w - z) / r;
    for (int j = 0; j < degree; ++j)
        out[j + 1] = out[j] * x * std::sqrt((j + 2.0) / (j + 1.0));
}

} // namespace detail_g

// G_{q,r}(f)(z): distance from f to polynomials of degree <= D in the
// normalized L^q norm of B(z, r). q = 2 is exact via the orthogonal
// expansion; other q run damped iteratively reweighted least squares over
// the same polynomial space. The returned value is always the directly
// integrated residual, never a difference of large terms.
inline GResult g_functional(const symbols::Symbol& f, Complex z, double r, double q, int degree,
                            const quadrature::GridOptions& opts = {}, double tol = 1e-9) {
    if (!(q >= 1)) throw UsageError("g_functional: q must be >= 1");
    if (degree < 0) throw UsageError("g_functional: degree must be >= 0");
    const auto grid = ball_grid(f, z, r, opts);
    const double area = grid.area();

    // cache nodes, weights, symbol values
    std::vector<Complex> nodes, fvals;
    std::vector<double> weights;
    nodes.reserve(grid.node_count());
    grid.for_each_node([&](Complex u, double w) {
        const Complex fv = f(u);
        if (!std::isfinite(fv.real()) || !std::isfinite(fv.imag()))
            throw EvaluationError("g_functional: non-finite symbol value", u);
        nodes.push_back(u);
        weights.push_back(w);
        fvals.push_back(fv);
    });

    // orthogonal-expansion coefficients (the exact q = 2 minimizer)
    std::vector<detail::KahanComplexSum> acc(degree + 1);
    std::vector<Complex> p;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        detail_g::eval_poly_basis(nodes[i], z, r, degree, p);
        for (int j = 0; j <= degree; ++j) acc[j].add(weights[i] * fvals[i] * std::conj(p[j]));
    }
    std::vector<Complex> beta(degree + 1);
    for (int j = 0; j <= degree; ++j) beta[j] = acc[j].value() / area;

    const auto residual_norm = [&](const std::vector<Complex>& coeffs, double expo) {
        detail::KahanSum sum;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            detail_g::eval_poly_basis(nodes[i], z, r, degree, p);
            Complex h(0, 0);
            for (int j = 0; j <= degree; ++j) h += coeffs[j] * p[j];
            const double d = std::abs(fvals[i] - h);
            sum.add(weights[i] * (expo == 2.0 ? d * d : std::pow(d, expo)));
        }
        const double mean = std::max(0.0, sum.value() / area);
        return expo == 2.0 ? std::sqrt(mean) : std::pow(mean, 1.0 / expo);
    };

    if (q == 2.0) return {residual_norm(beta, 2.0), true};

    // IRLS with damping 0.5 on the coefficient update
    const int max_iter = 200;
    const double damping = 0.5;
    std::vector<Complex> coeffs = beta;
    double scale = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) scale = std::max(scale, std::abs(fvals[i]));
    const double floor = 1e-8 * (scale + 1e-30);
    bool converged = false;
    std::vector<Complex> pv;
    for (int iter = 0; iter < max_iter; ++iter) {
        spectra::HermitianMatrix gram(degree + 1);
        std::vector<Complex> rhs(degree + 1, Complex(0, 0));
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            detail_g::eval_poly_basis(nodes[i], z, r, degree, pv);
            Complex h(0, 0);
            for (int j = 0; j <= degree; ++j) h += coeffs[j] * pv[j];
            const double d = std::max(std::abs(fvals[i] - h), floor);
            const double w = weights[i] * std::pow(d, q - 2.0);
            for (int j = 0; j <= degree; ++j) {
                rhs[j] += w * fvals[i] * std::conj(pv[j]);
                for (int l = j; l <= degree; ++l)
                    gram.at(j, l) += w * std::conj(pv[j]) * pv[l];
            }
        }
        for (int j = 0; j <= degree; ++j)
            for (int l = j; l <= degree; ++l) gram.set(j, l, gram.at(j, l));
        std::vector<Complex> next = spectra::hermitian_solve(std::move(gram), std::move(rhs));
        double delta = 0.0;
        for (int j = 0; j <= degree; ++j) {
            next[j] = damping * next[j] + (1.0 - damping) * coeffs[j];
            delta = std::max(delta, std::abs(next[j] - coeffs[j]));
        }
        coeffs = std::move(next);
        if (delta < tol) {
            converged = true;
            break;
        }
    }
    return {residual_norm(coeffs, q), converged};
}

struct LatticeReport {
    std::vector<Complex> points;
    std::vector<double> values;                              // per-point functional values
    std::vector<std::pair<double, double>> partial_aggregates; // (R, truncated power sum)
    std::vector<double> ring_increments;
    double norm_value = 0.0; // s-th root of the final aggregate
    double sup = 0.0;
    bool divergence_flag = false;
};

namespace detail_lattice {

inline std::vector<double> ring_radii(double r_max) {
    std::vector<double> radii;
    double r = 1.0;
    while (r < r_max - 1e-12) {
        radii.push_back(r);
        r *= 2.0;
    }
    radii.push_back(r_max);
    return radii;
}

inline std::vector<Complex> lattice_points(double delta, double r_max) {
    const long n = static_cast<long>(std::floor(r_max / delta + 1e-9));
    std::vector<Complex> pts;
    for (long iy = -n; iy <= n; ++iy)
        for (long ix = -n; ix <= n; ++ix) {
            const Complex z(delta * ix, delta * iy);
            if (std::abs(z) <= r_max + 1e-12) pts.push_back(z);
        }
    return pts;
}

// cell-area-weighted power sums per ring; flags divergence when the last
// ring's increment neither vanished nor decayed clearly (ratio 0.6) against
// the previous ring
inline LatticeReport aggregate_values(std::vector<Complex> points, std::vector<double> values,
                                      double delta, double r_max, double outer_exponent,
                                      double tol) {
    LatticeReport report;
    report.points = std::move(points);
    report.values = std::move(values);

    const std::vector<double> radii = ring_radii(r_max);
    std::vector<detail::KahanSum> ring_sum(radii.size());
    const double cell = delta * delta;
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const double dist = std::abs(report.points[i]);
        std::size_t ring = radii.size() - 1;
        for (std::size_t j = 0; j < radii.size(); ++j)
            if (dist <= radii[j] + 1e-12) {
                ring = j;
                break;
            }
        const double v = report.values[i];
        ring_sum[ring].add(cell * (outer_exponent == 1.0 ? v : std::pow(v, outer_exponent)));
        report.sup = std::max(report.sup, v);
    }

    double running = 0.0;
    for (std::size_t j = 0; j < radii.size(); ++j) {
        report.ring_increments.push_back(ring_sum[j].value());
        running += ring_sum[j].value();
        report.partial_aggregates.emplace_back(radii[j], running);
    }
    report.norm_value = running > 0.0 ? std::pow(running, 1.0 / outer_exponent) : 0.0;

    if (radii.size() >= 2) {
        const double last = report.ring_increments.back();
        const double prev = report.ring_increments[radii.size() - 2];
        const double floor = std::max(tol, 1e-6 * (1.0 + running));
        report.divergence_flag = last > floor && (prev <= 0.0 || last > 0.6 * prev);
    }
    return report;
}

template <class ValueFn>
LatticeReport aggregate(double delta, double r_max, double outer_exponent, double tol,
                        ValueFn&& value_of) {
    std::vector<Complex> points = lattice_points(delta, r_max);
    std::vector<double> values(points.size(), 0.0);
    detail::parallel_for(points.size(), [&](std::size_t i) { values[i] = value_of(points[i]); });
    return aggregate_values(std::move(points), std::move(values), delta, r_max, outer_exponent,
                            tol);
}

} // namespace detail_lattice

// truncated || G_{q,r}(f) ||_{L^s}^s as a lattice Riemann sum
inline LatticeReport ida_norm(const symbols::Symbol& f, const Params& params) {
    params.validate();
    return detail_lattice::aggregate(
        params.lattice_spacing, params.r_max, params.outer_exponent, params.tol,
        [&](Complex z) {
            return g_functional(f, z, params.ball_radius, params.inner_exponent, params.degree,
                                params.grid, params.tol)
                .value;
        });
}

// truncated integral of MO_{2,r}(f)^p
inline LatticeReport imo_norm(const symbols::Symbol& f, const Params& params) {
    params.validate();
    return detail_lattice::aggregate(
        params.lattice_spacing, params.r_max, params.outer_exponent, params.tol,
        [&](Complex z) { return mo(f, z, params.ball_radius, 2.0, params.grid); });
}

struct BmoReport {
    double sup = 0.0;
    bool growth_flag = false; // sup sits on the outermost ring and the last three ring sups increase
    std::vector<std::pair<double, double>> ring_sups;
};

inline BmoReport bmo_sup(const symbols::Symbol& f, const Params& params) {
    params.validate();
    const std::vector<Complex> pts =
        detail_lattice::lattice_points(params.lattice_spacing, params.r_max);
    std::vector<double> values(pts.size(), 0.0);
    detail::parallel_for(pts.size(), [&](std::size_t i) {
        values[i] = mo(f, pts[i], params.ball_radius, params.outer_exponent, params.grid);
    });

    const std::vector<double> radii = detail_lattice::ring_radii(params.r_max);
    std::vector<double> sups(radii.size(), 0.0);
    BmoReport report;
    std::size_t argmax_ring = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dist = std::abs(pts[i]);
        std::size_t ring = radii.size() - 1;
        for (std::size_t j = 0; j < radii.size(); ++j)
            if (dist <= radii[j] + 1e-12) {
                ring = j;
                break;
            }
        sups[ring] = std::max(sups[ring], values[i]);
        if (values[i] > report.sup) {
            report.sup = values[i];
            argmax_ring = ring;
        }
    }
    for (std::size_t j = 0; j < radii.size(); ++j) report.ring_sups.emplace_back(radii[j], sups[j]);
    const std::size_t n = radii.size();
    report.growth_flag = n >= 3 && argmax_ring == n - 1 && sups[n - 3] < sups[n - 2]
                         && sups[n - 2] < sups[n - 1];
    return report;
}

// || (I - P)(f o tau_lambda) ||, truncated at M projection coefficients:
// sqrt( ||f o tau||^2 - sum_{m<=M} |<f o tau, e_m>|^2 ), clipped at zero.
// tau_lambda(z) = z + lambda.
inline double compactness_probe(const symbols::Symbol& f, Complex lambda, int coeff_count,
                                const fock::FockBasis& basis,
                                quadrature::GridOptions opts = {}) {
    if (coeff_count < 0 || coeff_count > basis.max_degree())
        throw TruncationError("compactness_probe: coefficient count out of range");
    const fock::RadialWeight& w = basis.weight();

    double r_plane = w.truncation_radius_for_degree(coeff_count + f.degree_hint());
    const double shift = std::abs(lambda);
    for (double c : f.break_radii()) {
        r_plane = std::max(r_plane, shift + c + 4.0);
        const double lo = std::abs(shift - c), hi = shift + c;
        if (lo > 0) opts.break_radii.push_back(lo);
        opts.break_radii.push_back(hi);
    }
    opts.n_theta = std::max(opts.n_theta, std::max(64, 2 * coeff_count + 64));

    const auto grid = quadrature::PolarGrid::plane(r_plane, opts);
    detail::KahanSum norm2;
    std::vector<detail::KahanComplexSum> acc(coeff_count + 1);
    std::vector<Complex> e(coeff_count + 1);
    grid.for_each_node([&](Complex u, double wq) {
        const Complex g = f(u + lambda);
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
            throw EvaluationError("compactness_probe: non-finite symbol value", u);
        const double mass = wq * std::exp(-2.0 * w.phi(std::abs(u)));
        norm2.add(mass * std::norm(g));
        basis.eval_all(u, e);
        for (int m = 0; m <= coeff_count; ++m) acc[m].add(g * std::conj(e[m]) * mass);
    });

    std::vector<Complex> coeffs(coeff_count + 1);
    detail::KahanSum captured;
    for (int m = 0; m <= coeff_count; ++m) {
        coeffs[m] = acc[m].value();
        captured.add(std::norm(coeffs[m]));
    }
    // the radicand of ||g||^2 - sum |c_m|^2 only cross-checks consistency;
    // the returned value integrates the residual pointwise, which stays
    // accurate when the projection captures nearly everything
    const double radicand = norm2.value() - captured.value();
    if (radicand < -1e-8 * std::max(1.0, norm2.value()))
        throw NumericalInconsistencyError(
            "compactness_probe: captured coefficient mass exceeds the norm, radicand = "
            + std::to_string(radicand));

    detail::KahanSum resid2;
    grid.for_each_node([&](Complex u, double wq) {
        const Complex g = f(u + lambda);
        const double mass = wq * std::exp(-2.0 * w.phi(std::abs(u)));
        basis.eval_all(u, e);
        Complex r = g;
        for (int m = 0; m <= coeff_count; ++m) r -= coeffs[m] * e[m];
        resid2.add(mass * std::norm(r));
    });
    return std::sqrt(std::max(0.0, resid2.value()));
}

} // namespace fhl::oscillation
