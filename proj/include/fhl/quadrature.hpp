#pragma once
//
// fhl/quadrature.hpp
//
// Deterministic integration over disks, annuli and the truncated plane in
// polar coordinates: composite Gauss-Legendre panels radially, a uniform
// (trapezoid) rule in the angle. Panel breaks can be pinned to circles where
// the integrand stops being smooth.
//

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "fhl/common.hpp"
#include "fhl/errors.hpp"
#include "fhl/detail/sum.hpp"

namespace fhl::quadrature {

struct GaussRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights; // positive, sum to 2
};

// Newton iteration on the Legendre polynomial; cached per order.
inline const GaussRule& gauss_legendre(int order) {
    if (order < 1) throw UsageError("gauss_legendre: order must be >= 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < order; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = order * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[order - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[order - 1 - i] = rule.weights[i];
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

struct GridOptions {
    int gauss_order = 12;   // >= 4
    double panel_width = 0.5;
    int n_theta = 64;       // >= 8
    std::vector<double> break_radii; // radii about the grid center forcing panel breaks
};

class PolarGrid {
public:
    enum class DomainKind { disk, annulus, plane };

    static PolarGrid disk(Complex center, double radius, GridOptions opts = {}) {
        return PolarGrid(DomainKind::disk, center, 0.0, radius, std::move(opts));
    }
    static PolarGrid annulus(Complex center, double r_in, double r_out, GridOptions opts = {}) {
        return PolarGrid(DomainKind::annulus, center, r_in, r_out, std::move(opts));
    }
    static PolarGrid plane(double radius, GridOptions opts = {}) {
        return PolarGrid(DomainKind::plane, Complex(0, 0), 0.0, radius, std::move(opts));
    }

    DomainKind kind() const { return kind_; }
    Complex center() const { return center_; }
    double inner_radius() const { return r_in_; }
    double outer_radius() const { return r_out_; }
    double area() const { return kPi * (r_out_ * r_out_ - r_in_ * r_in_); }
    int gauss_order() const { return gauss_order_; }
    int n_theta() const { return static_cast<int>(cos_.size()); }

    std::size_t radial_count() const { return rho_.size(); }
    std::size_t node_count() const { return rho_.size() * cos_.size(); }
    double radial_node(std::size_t i) const { return rho_[i]; }
    // radial weight already includes the rho Jacobian and the angular step
    double combined_weight(std::size_t i) const { return wrho_[i]; }
    Complex unit_phase(std::size_t j) const { return {cos_[j], sin_[j]}; }

    double weight_sum() const {
        detail::KahanSum sum;
        const std::size_t nt = cos_.size();
        for (std::size_t i = 0; i < rho_.size(); ++i)
            for (std::size_t j = 0; j < nt; ++j) sum.add(wrho_[i]);
        return sum.value();
    }

    // Deterministic radial-major sweep; fn(u, weight).
    template <class F>
    void for_each_node(F&& fn) const {
        const std::size_t nt = cos_.size();
        for (std::size_t i = 0; i < rho_.size(); ++i) {
            const double rho = rho_[i];
            const double w = wrho_[i];
            for (std::size_t j = 0; j < nt; ++j) {
                const Complex u = center_ + rho * Complex(cos_[j], sin_[j]);
                fn(u, w);
            }
        }
    }

private:
    PolarGrid(DomainKind kind, Complex center, double r_in, double r_out, GridOptions opts)
        : kind_(kind), center_(center), r_in_(r_in), r_out_(r_out),
          gauss_order_(opts.gauss_order) {
        if (opts.gauss_order < 4) throw UsageError("PolarGrid: gauss_order must be >= 4");
        if (opts.n_theta < 8) throw UsageError("PolarGrid: n_theta must be >= 8");
        if (!(opts.panel_width > 0)) throw UsageError("PolarGrid: panel_width must be positive");
        if (!(r_out > r_in) || r_in < 0) throw UsageError("PolarGrid: bad radii");

        // segment [r_in, r_out] at declared break radii, then split into panels
        std::vector<double> cuts{r_in_, r_out_};
        for (double b : opts.break_radii)
            if (b > r_in_ + 1e-14 && b < r_out_ - 1e-14) cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                   cuts.end());

        const GaussRule& rule = gauss_legendre(opts.gauss_order);
        const double dtheta = kTwoPi / opts.n_theta;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double lo = cuts[s], hi = cuts[s + 1];
            const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / opts.panel_width - 1e-12)));
            const double h = (hi - lo) / panels;
            for (int p = 0; p < panels; ++p) {
                const double a = lo + p * h;
                const double mid = a + 0.5 * h, half = 0.5 * h;
                for (int g = 0; g < opts.gauss_order; ++g) {
                    const double rho = mid + half * rule.nodes[g];
                    rho_.push_back(rho);
                    wrho_.push_back(half * rule.weights[g] * rho * dtheta);
                }
            }
        }
        cos_.resize(opts.n_theta);
        sin_.resize(opts.n_theta);
        for (int j = 0; j < opts.n_theta; ++j) {
            cos_[j] = std::cos(dtheta * j);
            sin_[j] = std::sin(dtheta * j);
        }
    }

    DomainKind kind_;
    Complex center_;
    double r_in_, r_out_;
    int gauss_order_;
    std::vector<double> rho_, wrho_;
    std::vector<double> cos_, sin_;
};

// sum of weights * fn(node); throws EvaluationError on a non-finite sample
template <class F>
Complex integrate(const PolarGrid& grid, F&& fn) {
    detail::KahanComplexSum sum;
    grid.for_each_node([&](Complex u, double w) {
        const Complex v = fn(u);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw EvaluationError("integrate: non-finite integrand value", u);
        sum.add(w * v);
    });
    return sum.value();
}

template <class F>
Complex integrate_disk(F&& fn, Complex center, double r, const GridOptions& opts = {}) {
    return integrate(PolarGrid::disk(center, r, opts), fn);
}

template <class F>
Complex integrate_annulus(F&& fn, Complex center, double r_in, double r_out,
                          const GridOptions& opts = {}) {
    return integrate(PolarGrid::annulus(center, r_in, r_out, opts), fn);
}

struct PlaneIntegral {
    double value = 0.0;
    double tail_bound = 0.0; // estimated mass beyond the truncation radius
    bool tail_ok = true;
};

// Integral of fn(z) e^{-2 phi(|z|)} over |z| <= R. Weight is duck-typed:
// needs phi(rho) and lower_curvature(). The tail estimate assumes fn grows
// slower than the weight decays; a large tail sets the warning flag only.
template <class F, class W>
PlaneIntegral integrate_plane_weighted(F&& fn, const W& weight, double R,
                                       GridOptions opts = {}, double tail_tol = 1e-10) {
    if (!(R > 0)) throw UsageError("integrate_plane_weighted: R must be positive");
    PolarGrid grid = PolarGrid::plane(R, std::move(opts));
    detail::KahanSum sum;
    grid.for_each_node([&](Complex u, double w) {
        const double v = fn(u);
        if (!std::isfinite(v))
            throw EvaluationError("integrate_plane_weighted: non-finite integrand", u);
        sum.add(w * v * std::exp(-2.0 * weight.phi(std::abs(u))));
    });

    PlaneIntegral out;
    out.value = sum.value();
    double boundary_max = 0.0;
    const int nt = grid.n_theta();
    for (int j = 0; j < nt; ++j) {
        const double v = std::abs(fn(R * grid.unit_phase(static_cast<std::size_t>(j))));
        if (std::isfinite(v)) boundary_max = std::max(boundary_max, v);
    }
    const double m = weight.lower_curvature();
    out.tail_bound = kTwoPi * boundary_max * std::exp(-2.0 * weight.phi(R)) / m;
    out.tail_ok = out.tail_bound <= tail_tol;
    return out;
}

struct ExactnessRow {
    int a = 0, b = 0;   // monomial (u-c)^a conj(u-c)^b
    double error = 0.0; // relative to the |u-c|^{a+b} mass of the domain
};

struct ExactnessReport {
    double max_error = 0.0;
    std::vector<ExactnessRow> rows;
};

// Integrates (u-center)^a conj(u-center)^b for a+b <= max_degree against the
// closed form (zero unless a == b) and reports scaled errors.
inline ExactnessReport exactness_report(const PolarGrid& grid, int max_degree = -1) {
    if (max_degree < 0) max_degree = 2 * grid.gauss_order() - 2;
    const Complex c = grid.center();
    const double ri = grid.inner_radius(), ro = grid.outer_radius();
    ExactnessReport report;
    for (int a = 0; a <= max_degree; ++a) {
        for (int b = 0; a + b <= max_degree; ++b) {
            const Complex got = integrate(grid, [&](Complex u) {
                const Complex d = u - c;
                Complex p(1, 0);
                for (int i = 0; i < a; ++i) p *= d;
                for (int i = 0; i < b; ++i) p *= std::conj(d);
                return p;
            });
            const int n = a + b;
            double exact = 0.0;
            if (a == b)
                exact = kTwoPi * (std::pow(ro, 2 * a + 2) - std::pow(ri, 2 * a + 2)) / (2 * a + 2);
            const double scale = kTwoPi * (std::pow(ro, n + 2) - std::pow(ri, n + 2)) / (n + 2);
            report.rows.push_back({a, b, std::abs(got - exact) / scale});
            report.max_error = std::max(report.max_error, report.rows.back().error);
        }
    }
    return report;
}

} // namespace fhl::quadrature
