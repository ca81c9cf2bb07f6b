#pragma once
//
// fhl/experiments.hpp
//
// The experiment registry behind the CLI. Each experiment maps one of the
// studied claims onto a reproducible run with a table report and named
// pass/fail verdicts; verdicts are attached only for the registered default
// symbol/weight combinations where the expected outcome is pinned.
//

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <unistd.h>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhl/common.hpp"
#include "fhl/errors.hpp"
#include "fhl/fock.hpp"
#include "fhl/hankel.hpp"
#include "fhl/oscillation.hpp"
#include "fhl/quadrature.hpp"
#include "fhl/report.hpp"
#include "fhl/spectra.hpp"
#include "fhl/symbols.hpp"

namespace fhl::experiments {

struct Config {
    std::string experiment;
    std::string symbol_text;              // empty: experiment default
    std::string weight_text = "classical";
    int domain_trunc = 24;                // N
    int proj_trunc = -1;                  // M
    int spectrum_modes = 2000;            // K
    std::vector<double> p_values;         // empty: experiment default
    double ball_radius = 1.0;             // r
    double inner_exponent = 2.0;          // q
    int degree = 25;                      // D
    double lattice_spacing = 0.5;         // delta
    double r_max = 0.0;                   // 0: experiment default
    std::vector<double> radii;            // |z| stations (mo-decay)
    std::vector<double> lambdas;          // translations (compactness-probe)
    double tol = 1e-9;
    std::string out_path;                 // empty: <experiment>.<format>
    report::Format format = report::Format::csv;
    std::uint64_t seed = 12345;
};

inline fock::RadialWeight parse_weight(const std::string& text) {
    if (text.empty() || text == "classical") return fock::RadialWeight::classical();
    if (text.rfind("gaussian:", 0) == 0) {
        const double alpha = std::strtod(text.c_str() + 9, nullptr);
        return fock::RadialWeight::gaussian(alpha);
    }
    // custom weight file: {"alpha": a, "log_coeff": b} encodes
    // phi = a rho^2 + b log(1 + rho^2), laplacian 4a + 4b/(1+rho^2)^2
    std::ifstream in(text);
    if (!in) throw InvalidWeightError("cannot open weight file: " + text);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InvalidWeightError("bad weight file " + text + ": " + e.what());
    }
    if (!j.contains("alpha")) throw InvalidWeightError("weight file needs an 'alpha' key");
    const double alpha = j["alpha"].get<double>();
    const double beta = j.value("log_coeff", 0.0);
    if (beta == 0.0) return fock::RadialWeight::gaussian(alpha);
    const double m = 4.0 * alpha + 4.0 * std::min(beta, 0.0);
    const double M = 4.0 * alpha + 4.0 * std::max(beta, 0.0);
    return fock::RadialWeight::custom(
        [alpha, beta](double rho) { return alpha * rho * rho + beta * std::log1p(rho * rho); },
        [alpha, beta](double rho) {
            const double d = 1.0 + rho * rho;
            return 4.0 * alpha + 4.0 * beta / (d * d);
        },
        m, M);
}

namespace detail_exp {

inline std::string fmt(double v) { return report::detail::format_double(v); }

inline std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += fmt(values[i]);
    }
    return out;
}

inline std::string canonical_symbol(const std::string& text) {
    return symbols::print_symbol(symbols::parse_symbol(text));
}

inline bool default_setup(const Config& cfg, const std::string& default_symbol) {
    const std::string sym = cfg.symbol_text.empty() ? default_symbol : cfg.symbol_text;
    return canonical_symbol(sym) == canonical_symbol(default_symbol)
           && (cfg.weight_text.empty() || cfg.weight_text == "classical");
}

inline symbols::Symbol pick_symbol(const Config& cfg, const std::string& fallback) {
    return symbols::parse_symbol(cfg.symbol_text.empty() ? fallback : cfg.symbol_text);
}

inline std::vector<double> pick(const std::vector<double>& given, std::vector<double> fallback) {
    return given.empty() ? std::move(fallback) : given;
}

inline void add_verdict(report::RunReport& rep, const std::string& name, bool pass,
                        std::string detail) {
    rep.verdicts.push_back({name, pass, std::move(detail)});
}

inline double uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

// ----------------------------------------------------------------- bcp-sweep

inline void run_bcp_sweep(const Config& cfg, report::RunReport& rep) {
    const auto sym = pick_symbol(cfg, "xia");
    const auto view = symbols::single_frequency_view(sym);
    if (!view)
        throw UsageError("bcp-sweep needs a single-frequency symbol (xia, radial(...), "
                         "or conj of one)");
    const auto weight = parse_weight(cfg.weight_text);
    const int modes = std::max(16, cfg.spectrum_modes);
    const std::vector<double> ps = pick(cfg.p_values, {0.5, 1.0, 1.5, 2.0});
    for (double p : ps)
        if (!(p > 0)) throw UsageError("bcp-sweep: p must be positive");

    const fock::FockBasis basis(weight, modes + std::abs(view->nu) + 1);
    const auto spec_f = hankel::single_frequency_spectrum(sym, basis, modes);
    const auto spec_c =
        hankel::single_frequency_spectrum(symbols::Symbol::conjugate(sym), basis, modes);

    const std::vector<std::size_t> checkpoints = {
        static_cast<std::size_t>(modes / 8), static_cast<std::size_t>(modes / 4),
        static_cast<std::size_t>(modes / 2), static_cast<std::size_t>(modes)};
    // an increment above this over the last doubling marks the partial sums
    // as still growing (harmonic-type divergence adds ~log 2 per doubling)
    const double divergence_increment = 0.1;

    report::Table table;
    table.name = "schatten";
    table.columns = {"p", "K", "partial_sum_f", "partial_sum_conj_f", "divergence_flag_f",
                     "divergence_flag_conj_f"};

    bool f_all_summable = true, conj_low_all_divergent = true, conj_high_all_summable = true;
    std::string increments_detail;
    for (double p : ps) {
        std::vector<double> sums_f, sums_c;
        for (std::size_t k : checkpoints) {
            sums_f.push_back(hankel::schatten_partial(spec_f, p, std::min(k, spec_f.values.size())));
            sums_c.push_back(hankel::schatten_partial(spec_c, p, std::min(k, spec_c.values.size())));
        }
        bool flag_f = false, flag_c = false;
        for (std::size_t i = 1; i < checkpoints.size(); ++i) {
            flag_f = sums_f[i] - sums_f[i - 1] > divergence_increment;
            flag_c = sums_c[i] - sums_c[i - 1] > divergence_increment;
            table.add_row(p, checkpoints[i], sums_f[i], sums_c[i], flag_f, flag_c);
        }
        if (flag_f) f_all_summable = false;
        if (p <= 1.0 && !flag_c) conj_low_all_divergent = false;
        if (p > 1.0 && flag_c) conj_high_all_summable = false;
        increments_detail += "p=" + fmt(p) + ": conj increment "
                             + fmt(sums_c.back() - sums_c[sums_c.size() - 2]) + "; ";
    }
    rep.tables.push_back(std::move(table));

    if (default_setup(cfg, "xia")) {
        const bool has_low = std::any_of(ps.begin(), ps.end(), [](double p) { return p <= 1.0; });
        const bool has_high = std::any_of(ps.begin(), ps.end(), [](double p) { return p > 1.0; });
        add_verdict(rep, "schatten-f-summable-all-p", f_all_summable,
                    "partial sums of the symbol side settle at every p");
        if (has_low)
            add_verdict(rep, "schatten-conj-divergent-p-le-1", conj_low_all_divergent,
                        increments_detail);
        if (has_high)
            add_verdict(rep, "schatten-conj-summable-p-gt-1", conj_high_all_summable,
                        increments_detail);
    }
}

// ------------------------------------------------------------------ mo-decay

inline void run_mo_decay(const Config& cfg, report::RunReport& rep) {
    const auto sym = pick_symbol(cfg, "conj(xia)");
    const std::vector<double> stations = pick(cfg.radii, {8.0, 16.0, 32.0});

    report::Table table;
    table.name = "mo_decay";
    table.columns = {"abs_z", "mo", "mo_scaled"};
    bool in_window = true;
    for (double r : stations) {
        if (!(r > 0)) throw UsageError("mo-decay: radii must be positive");
        const double value = oscillation::mo(sym, Complex(r, 0.0), cfg.ball_radius, 2.0);
        const double scaled = value * r * r;
        table.add_row(r, value, scaled);
        if (scaled < 0.65 || scaled > 0.75) in_window = false;
    }
    rep.tables.push_back(std::move(table));

    if (default_setup(cfg, "conj(xia)"))
        add_verdict(rep, "mo-scaled-window", in_window,
                    "MO(z) |z|^2 within [0.65, 0.75] at every station (limit 1/sqrt(2))");
}

// -------------------------------------------------------------- imo-integral

inline void run_imo_integral(const Config& cfg, report::RunReport& rep) {
    const auto sym = pick_symbol(cfg, "conj(xia)");
    const std::vector<double> ps = pick(cfg.p_values, {1.0, 2.0});
    const double r_max = cfg.r_max > 0 ? cfg.r_max : 32.0;

    oscillation::Params params;
    params.ball_radius = cfg.ball_radius;
    params.lattice_spacing = cfg.lattice_spacing;
    params.r_max = r_max;
    params.tol = cfg.tol;
    params.outer_exponent = 1.0;
    params.validate();

    // MO values are shared across the outer exponents
    const auto points =
        oscillation::detail_lattice::lattice_points(params.lattice_spacing, params.r_max);
    std::vector<double> values(points.size(), 0.0);
    fhl::detail::parallel_for(points.size(), [&](std::size_t i) {
        values[i] = oscillation::mo(sym, points[i], params.ball_radius, 2.0, params.grid);
    });

    report::Table rings;
    rings.name = "imo_rings";
    rings.columns = {"p", "R", "partial", "increment"};
    report::Table summary;
    summary.name = "imo_summary";
    summary.columns = {"p", "total", "divergence_flag"};

    const double expected_inc = std::sqrt(2.0) * kPi * std::log(2.0);
    bool p1_increments_ok = true, p1_divergent = false, p2_tail_ok = true, p2_convergent = true;
    for (double p : ps) {
        if (!(p > 0)) throw UsageError("imo-integral: p must be positive");
        const auto report = oscillation::detail_lattice::aggregate_values(
            points, values, params.lattice_spacing, params.r_max, p, params.tol);
        for (std::size_t j = 0; j < report.partial_aggregates.size(); ++j)
            rings.add_row(p, report.partial_aggregates[j].first,
                          report.partial_aggregates[j].second, report.ring_increments[j]);
        summary.add_row(p, report.partial_aggregates.back().second, report.divergence_flag);

        const auto& inc = report.ring_increments;
        if (p == 1.0 && inc.size() >= 2) {
            p1_divergent = report.divergence_flag;
            for (std::size_t j = inc.size() - 2; j < inc.size(); ++j)
                if (std::abs(inc[j] - expected_inc) > 0.15 * expected_inc)
                    p1_increments_ok = false;
        }
        if (p == 2.0 && !inc.empty()) {
            p2_tail_ok = inc.back() < 0.01;
            p2_convergent = !report.divergence_flag;
        }
    }
    rep.tables.push_back(std::move(rings));
    rep.tables.push_back(std::move(summary));

    if (default_setup(cfg, "conj(xia)") && r_max >= 32.0) {
        const bool has1 = std::count(ps.begin(), ps.end(), 1.0) > 0;
        const bool has2 = std::count(ps.begin(), ps.end(), 2.0) > 0;
        if (has1) {
            add_verdict(rep, "imo-ring-increments-p1", p1_increments_ok,
                        "last two ring increments within 15% of sqrt(2) pi ln 2 = "
                            + fmt(expected_inc));
            add_verdict(rep, "imo-divergent-p1", p1_divergent, "ring increments keep growing");
        }
        if (has2) {
            add_verdict(rep, "imo-tail-p2", p2_tail_ok, "outermost ring increment below 0.01");
            add_verdict(rep, "imo-convergent-p2", p2_convergent, "ring increments decay");
        }
    }
}

// ----------------------------------------------------------------- ida-check

inline void run_ida_check(const Config& cfg, report::RunReport& rep) {
    const auto sym = pick_symbol(cfg, "xia");
    const std::vector<double> ps = pick(cfg.p_values, {1.0});

    oscillation::Params params;
    params.ball_radius = cfg.ball_radius;
    params.inner_exponent = cfg.inner_exponent;
    params.outer_exponent = ps.front();
    params.degree = cfg.degree;
    params.lattice_spacing = cfg.lattice_spacing;
    params.r_max = cfg.r_max > 0 ? cfg.r_max : 8.0;
    params.tol = cfg.tol;
    const auto lattice = oscillation::ida_norm(sym, params);

    report::Table rings;
    rings.name = "ida_rings";
    rings.columns = {"R", "partial", "increment"};
    for (std::size_t j = 0; j < lattice.partial_aggregates.size(); ++j)
        rings.add_row(lattice.partial_aggregates[j].first, lattice.partial_aggregates[j].second,
                      lattice.ring_increments[j]);
    rep.tables.push_back(std::move(rings));

    double inner_max = 0.0;
    for (std::size_t i = 0; i < lattice.points.size(); ++i)
        if (std::abs(lattice.points[i]) < 2.0)
            inner_max = std::max(inner_max, lattice.values[i]);

    report::Table spots;
    spots.name = "g_spots";
    spots.columns = {"abs_z", "g"};
    std::vector<double> spot_values;
    for (double station : {2.0, 3.0, 4.0, 8.0}) {
        const double g =
            oscillation::g_functional(sym, Complex(station, 0.0), params.ball_radius,
                                      params.inner_exponent, params.degree, params.grid,
                                      params.tol)
                .value;
        spot_values.push_back(g);
        spots.add_row(station, g);
    }
    rep.tables.push_back(std::move(spots));

    report::Table summary;
    summary.name = "ida_summary";
    summary.columns = {"s", "norm", "sup_g", "max_g_inside_2", "divergence_flag"};
    summary.add_row(params.outer_exponent, lattice.norm_value, lattice.sup, inner_max,
                    lattice.divergence_flag);
    rep.tables.push_back(std::move(summary));

    if (default_setup(cfg, "xia")) {
        bool spots_ok = true;
        for (double g : spot_values) spots_ok = spots_ok && g <= 1e-6;
        add_verdict(rep, "g-vanishes-on-outer-stations", spots_ok,
                    "G_{2,1} at |z| in {2,3,4,8} below 1e-6");
        add_verdict(rep, "g-bounded-inside", std::isfinite(inner_max) && inner_max < 10.0,
                    "max G over |z| < 2 is " + fmt(inner_max));
        bool stabilized = true;
        for (std::size_t j = 0; j < lattice.partial_aggregates.size(); ++j)
            if (lattice.partial_aggregates[j].first > 4.0 + 1e-9
                && lattice.ring_increments[j] > 1e-6)
                stabilized = false;
        add_verdict(rep, "ida-aggregate-stabilizes", stabilized && !lattice.divergence_flag,
                    "ring increments beyond R = 4 below 1e-6");
    }
}

// ------------------------------------------------------------- entire-symbol

inline void run_entire_symbol(const Config& cfg, report::RunReport& rep) {
    const auto sym = pick_symbol(cfg, "poly(0,0,1)");
    const bool defaults = default_setup(cfg, "poly(0,0,1)");

    oscillation::Params params;
    params.degree = cfg.degree;
    params.lattice_spacing = cfg.lattice_spacing;
    params.r_max = cfg.r_max > 0 ? cfg.r_max : 8.0;
    params.tol = cfg.tol;
    params.outer_exponent = 2.0;

    const auto g_lattice = oscillation::ida_norm(sym, params);
    report::Table gtab;
    gtab.name = "entire_g";
    gtab.columns = {"sup_g", "norm"};
    gtab.add_row(g_lattice.sup, g_lattice.norm_value);
    rep.tables.push_back(std::move(gtab));

    report::Table mos;
    mos.name = "entire_mo";
    mos.columns = {"abs_z", "mo_sq", "closed_form", "abs_diff"};
    double worst_mo_diff = 0.0;
    for (double station : {0.0, 1.0, 5.0}) {
        const double m = oscillation::mo(sym, Complex(station, 0.0), 1.0, 2.0, params.grid);
        const double closed = 2.0 * station * station + 1.0 / 3.0;
        const double diff = std::abs(m * m - closed);
        worst_mo_diff = std::max(worst_mo_diff, diff);
        mos.add_row(station, m * m, closed, diff);
    }
    rep.tables.push_back(std::move(mos));

    const auto bmo = oscillation::bmo_sup(sym, params);
    report::Table bmotab;
    bmotab.name = "bmo";
    bmotab.columns = {"sup", "growth_flag"};
    bmotab.add_row(bmo.sup, bmo.growth_flag);
    rep.tables.push_back(std::move(bmotab));

    // fixed second section: the linear symbol f = z
    const auto linear = symbols::parse_symbol("poly(0,1)");
    const auto weight = parse_weight(cfg.weight_text);
    const fock::FockBasis basis(weight, 40);
    const auto model = hankel::HankelModel::make(basis, linear, 12, 20);
    const auto normal = hankel::normal_matrix(model);
    double max_entry = 0.0;
    for (std::size_t j = 0; j < normal.order(); ++j)
        for (std::size_t k = 0; k < normal.order(); ++k)
            max_entry = std::max(max_entry, std::abs(normal.at(j, k)));

    oscillation::Params linear_params = params;
    linear_params.outer_exponent = 2.0;
    const auto linear_imo = oscillation::imo_norm(linear, linear_params);

    report::Table lin;
    lin.name = "linear_symbol";
    lin.columns = {"max_normal_entry", "imo_divergence_flag"};
    lin.add_row(max_entry, linear_imo.divergence_flag);
    rep.tables.push_back(std::move(lin));

    if (defaults) {
        add_verdict(rep, "entire-g-vanishes", g_lattice.sup <= 1e-8,
                    "sup of the lattice G is " + fmt(g_lattice.sup));
        add_verdict(rep, "entire-mo-closed-form", worst_mo_diff <= 1e-6,
                    "MO^2 = 2|z|^2 + 1/3 within 1e-6, worst " + fmt(worst_mo_diff));
        add_verdict(rep, "entire-bmo-grows", bmo.growth_flag,
                    "oscillation sup grows through the outermost rings");
        add_verdict(rep, "linear-hankel-vanishes", max_entry <= 1e-9,
                    "max |normal matrix entry| for f = z is " + fmt(max_entry));
        add_verdict(rep, "linear-imo-diverges", linear_imo.divergence_flag,
                    "IMO lattice sums for f = z keep growing");
    }
}

// --------------------------------------------------------- compactness-probe

inline void run_compactness_probe(const Config& cfg, report::RunReport& rep) {
    const std::vector<double> lambdas = pick(cfg.lambdas, {0.0, 2.0, 4.0, 8.0});
    const int coeff_count = cfg.proj_trunc > 0 ? cfg.proj_trunc : 128;
    const auto weight = parse_weight(cfg.weight_text);
    const fock::FockBasis basis(weight, coeff_count);

    std::vector<std::string> symbol_texts;
    if (cfg.symbol_text.empty())
        symbol_texts = {"xia", "conj(xia)", "conj(poly(0,1))"};
    else
        symbol_texts = {cfg.symbol_text};

    std::vector<symbols::Symbol> syms;
    for (const auto& text : symbol_texts) syms.push_back(symbols::parse_symbol(text));

    // probes are independent; slots keep the report deterministic
    std::vector<std::vector<double>> runs(syms.size(),
                                          std::vector<double>(lambdas.size(), 0.0));
    fhl::detail::parallel_for(syms.size() * lambdas.size(), [&](std::size_t task) {
        const std::size_t si = task / lambdas.size(), li = task % lambdas.size();
        runs[si][li] = oscillation::compactness_probe(syms[si], Complex(lambdas[li], 0.0),
                                                      coeff_count, basis);
    });

    report::Table table;
    table.name = "probe";
    table.columns = {"symbol", "lambda", "value"};
    for (std::size_t si = 0; si < syms.size(); ++si)
        for (std::size_t li = 0; li < lambdas.size(); ++li)
            table.add_row(symbols::print_symbol(syms[si]), lambdas[li], runs[si][li]);
    rep.tables.push_back(std::move(table));

    const bool classical = cfg.weight_text.empty() || cfg.weight_text == "classical";
    if (cfg.symbol_text.empty() && classical && lambdas.size() >= 2) {
        auto strictly_decreasing = [](const std::vector<double>& v) {
            for (std::size_t i = 1; i < v.size(); ++i)
                if (!(v[i] < v[i - 1])) return false;
            return true;
        };
        add_verdict(rep, "probe-xia-decreasing", strictly_decreasing(runs[0]),
                    "translated residuals of the counterexample shrink");
        add_verdict(rep, "probe-xia-origin", std::abs(runs[0][0] - 0.83017) <= 1e-4,
                    "probe(0) = " + fmt(runs[0][0]) + ", expected 0.83017 +- 1e-4");
        add_verdict(rep, "probe-conj-decreasing", strictly_decreasing(runs[1]),
                    "translated residuals of the conjugate shrink");
        add_verdict(rep, "probe-zbar-non-vanishing",
                    runs[2].back() > 0.5 * runs[2].front() && runs[2].back() > 0.1,
                    "conj(z) residual stays near sqrt(pi) = " + fmt(std::sqrt(kPi)));
    }
}

// ------------------------------------------------------------------ validate

inline void run_validate(const Config& cfg, report::RunReport& rep) {
    using symbols::Symbol;
    std::mt19937_64 rng(cfg.seed);
    const auto weight = fock::RadialWeight::classical();

    { // dense Jacobi path against the mode-resolved path
        const fock::FockBasis basis(weight, 42);
        for (const char* text : {"xia", "conj(xia)"}) {
            const auto sym = symbols::parse_symbol(text);
            const auto model = hankel::HankelModel::make(basis, sym, 24, 40);
            const auto dense = spectra::singular_values_from_normal(hankel::normal_matrix(model));
            const auto closed = hankel::single_frequency_spectrum(sym, basis, 24);
            double worst = 0.0;
            for (std::size_t j = 0; j < dense.values.size(); ++j)
                worst = std::max(worst, std::abs(dense.values[j] - closed.values[j]));
            add_verdict(rep, std::string("dense-vs-closed-") + text, worst <= 1e-6,
                        "max |difference| over sorted singular values: " + fmt(worst));
        }
    }

    { // eigensolver fixtures with characteristic-polynomial references
        spectra::HermitianMatrix a(2);
        a.set(0, 0, {2, 0});
        a.set(1, 1, {2, 0});
        a.set(0, 1, {1, 0});
        const auto ea = spectra::jacobi_eigen(a);
        spectra::HermitianMatrix b(2);
        b.set(0, 0, {1, 0});
        b.set(1, 1, {1, 0});
        b.set(0, 1, {0, 1});
        const auto eb = spectra::jacobi_eigen(b);
        const bool fixtures_ok = std::abs(ea.values[0] - 3.0) <= 1e-10
                                 && std::abs(ea.values[1] - 1.0) <= 1e-10
                                 && std::abs(eb.values[0] - 2.0) <= 1e-10
                                 && std::abs(eb.values[1]) <= 1e-10;
        add_verdict(rep, "jacobi-fixtures", fixtures_ok, "2x2 closed-form spectra reproduced");

        double worst2 = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const double x = 2.0 * uniform(rng) - 1.0, y = 2.0 * uniform(rng) - 1.0;
            const Complex off(2.0 * uniform(rng) - 1.0, 2.0 * uniform(rng) - 1.0);
            spectra::HermitianMatrix h(2);
            h.set(0, 0, {x, 0});
            h.set(1, 1, {y, 0});
            h.set(0, 1, off);
            const auto eig = spectra::jacobi_eigen(h);
            const double tr = x + y, det = x * y - std::norm(off);
            const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
            worst2 = std::max(worst2, std::abs(eig.values[0] - (tr / 2 + disc)));
            worst2 = std::max(worst2, std::abs(eig.values[1] - (tr / 2 - disc)));
        }
        // 3x3: the characteristic polynomial has real coefficients, roots by
        // the trigonometric method
        for (int trial = 0; trial < 50; ++trial) {
            const double a = 2.0 * uniform(rng) - 1.0, d = 2.0 * uniform(rng) - 1.0,
                         f = 2.0 * uniform(rng) - 1.0;
            const Complex b(2.0 * uniform(rng) - 1.0, 2.0 * uniform(rng) - 1.0);
            const Complex c(2.0 * uniform(rng) - 1.0, 2.0 * uniform(rng) - 1.0);
            const Complex e(2.0 * uniform(rng) - 1.0, 2.0 * uniform(rng) - 1.0);
            spectra::HermitianMatrix h(3);
            h.set(0, 0, {a, 0});
            h.set(1, 1, {d, 0});
            h.set(2, 2, {f, 0});
            h.set(0, 1, b);
            h.set(0, 2, c);
            h.set(1, 2, e);
            const auto eig = spectra::jacobi_eigen(h);
            const double q = (a + d + f) / 3.0;
            const double p2 = (a - q) * (a - q) + (d - q) * (d - q) + (f - q) * (f - q)
                              + 2.0 * (std::norm(b) + std::norm(c) + std::norm(e));
            const double p = std::sqrt(p2 / 6.0);
            const Complex A(a - q, 0), D(d - q, 0), F(f - q, 0);
            const Complex det = A * (D * F - e * std::conj(e))
                                - b * (std::conj(b) * F - e * std::conj(c))
                                + c * (std::conj(b) * std::conj(e) - D * std::conj(c));
            double rr = det.real() / (2.0 * p * p * p);
            rr = std::min(1.0, std::max(-1.0, rr));
            const double phi = std::acos(rr) / 3.0;
            double roots[3];
            roots[0] = q + 2.0 * p * std::cos(phi);
            roots[2] = q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
            roots[1] = 3.0 * q - roots[0] - roots[2];
            std::sort(roots, roots + 3, std::greater<double>());
            for (int i = 0; i < 3; ++i)
                worst2 = std::max(worst2, std::abs(eig.values[i] - roots[i]));
        }
        add_verdict(rep, "jacobi-charpoly-random", worst2 <= 1e-10,
                    "worst deviation from 2x2/3x3 characteristic roots: " + fmt(worst2));

        double worst_inv = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t n = 6 + trial;
            spectra::HermitianMatrix h(n);
            for (std::size_t j = 0; j < n; ++j) {
                h.set(j, j, {2.0 * uniform(rng) - 1.0, 0});
                for (std::size_t k = j + 1; k < n; ++k)
                    h.set(j, k, {2.0 * uniform(rng) - 1.0, 2.0 * uniform(rng) - 1.0});
            }
            const double tr = h.trace(), fro = h.frobenius();
            const double shift = 2.0 * uniform(rng) - 1.0;
            const auto eig = spectra::jacobi_eigen(h);
            spectra::HermitianMatrix hs = h;
            for (std::size_t j = 0; j < n; ++j) hs.set(j, j, h.at(j, j) + Complex(shift, 0));
            const auto eig_s = spectra::jacobi_eigen(hs);
            double tr_sum = 0.0, fro_sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                tr_sum += eig.values[j];
                fro_sum += eig.values[j] * eig.values[j];
                worst_inv = std::max(worst_inv,
                                     std::abs(eig_s.values[j] - eig.values[j] - shift));
            }
            worst_inv = std::max(worst_inv, std::abs(tr_sum - tr) / std::max(1.0, fro));
            worst_inv =
                std::max(worst_inv, std::abs(std::sqrt(fro_sum) - fro) / std::max(1.0, fro));
        }
        add_verdict(rep, "jacobi-trace-frobenius-shift", worst_inv <= 1e-9,
                    "trace/Frobenius preservation and shift covariance: " + fmt(worst_inv));
    }

    { // quadrature exactness
        const auto report = quadrature::exactness_report(quadrature::PolarGrid::disk({0, 0}, 1.0));
        add_verdict(rep, "quadrature-exactness", report.max_error <= 1e-10,
                    "max scaled monomial error " + fmt(report.max_error));
    }

    { // basis Gram identity
        const fock::FockBasis basis(weight, 16);
        const auto grid = basis.plane_grid(32);
        double worst = 0.0;
        for (int k = 0; k <= 16; ++k) {
            const auto col =
                basis.project([&](Complex u) { return basis.eval(k, u); }, 16, grid);
            for (int m = 0; m <= 16; ++m)
                worst = std::max(worst, std::abs(col[m] - (m == k ? Complex(1, 0) : Complex(0, 0))));
        }
        add_verdict(rep, "basis-gram-identity", worst <= 1e-9,
                    "max |Gram - I| entry " + fmt(worst));
    }

    { // Bessel inequality column-wise on the shipped symbols
        const fock::FockBasis basis(weight, 44);
        bool ok = true;
        double worst = -1e300;
        for (const char* text : {"xia", "conj(xia)", "poly(0,1)", "indicator(1)"}) {
            const auto model =
                hankel::HankelModel::make(basis, symbols::parse_symbol(text), 8);
            const auto a = hankel::cross_matrix(model);
            const auto b = hankel::gram_matrix(model);
            for (std::size_t k = 0; k < a.cols(); ++k) {
                double col = 0.0;
                for (std::size_t m = 0; m < a.rows(); ++m) col += std::norm(a.at(m, k));
                worst = std::max(worst, col - b.at(k, k).real());
                ok = ok && col <= b.at(k, k).real() + 1e-9;
            }
        }
        add_verdict(rep, "bessel-inequality", ok, "worst column excess " + fmt(worst));
    }

    { // G dominated by MO on random draws
        std::vector<Symbol> family = {Symbol::xia(), symbols::parse_symbol("conj(xia)"),
                                      symbols::parse_symbol("poly(0,1)"),
                                      symbols::parse_symbol("conj(poly(0,0,1))"),
                                      symbols::parse_symbol("indicator(1)")};
        bool ok = true;
        bool conj_ok = true;
        for (int trial = 0; trial < 100; ++trial) {
            const Symbol& f = family[rng() % family.size()];
            const Complex z(6.0 * uniform(rng) - 3.0, 6.0 * uniform(rng) - 3.0);
            const double g = oscillation::g_functional(f, z, 1.0, 2.0, 8).value;
            const double m = oscillation::mo(f, z, 1.0, 2.0);
            ok = ok && g <= m + 1e-12;
            conj_ok = conj_ok && oscillation::mo(Symbol::conjugate(f), z, 1.0, 2.0) == m;
        }
        add_verdict(rep, "g-dominated-by-mo", ok, "100 random symbol/point draws");
        add_verdict(rep, "mo-conjugation-exact", conj_ok,
                    "MO(f) equals MO(conj f) bit for bit on the draws");
    }

    { // Hilbert-Schmidt norm against the spectrum sum
        const fock::FockBasis basis(weight, 60);
        const auto sym = Symbol::xia();
        const double direct =
            hankel::hs_norm_direct(hankel::HankelModel::make(basis, sym, 16));
        const auto spec = hankel::single_frequency_spectrum(sym, basis, 16);
        double sum2 = 0.0;
        for (double s : spec.values) sum2 += s * s;
        const double diff = std::abs(direct - std::sqrt(sum2));
        add_verdict(rep, "hs-norm-trace-identity", diff <= 1e-7,
                    "direct vs spectrum Hilbert-Schmidt norms differ by " + fmt(diff));
    }

    { // byte-identical reports under a fixed seed
        namespace fs = std::filesystem;
        Config mini;
        mini.experiment = "bcp-sweep";
        mini.spectrum_modes = 64;
        mini.p_values = {1.0};
        mini.seed = cfg.seed;
        const fs::path base = fs::temp_directory_path();
        // process-unique names: concurrent test runners must not collide
        const std::string tag = std::to_string(cfg.seed) + "_"
                                + std::to_string(static_cast<long long>(::getpid()));
        const fs::path p1 = base / ("fhl_det_a_" + tag + ".csv");
        const fs::path p2 = base / ("fhl_det_b_" + tag + ".csv");
        auto render = [&](const fs::path& p) {
            report::RunReport r;
            r.config = {{"experiment", "bcp-sweep"}, {"seed", tag}};
            run_bcp_sweep(mini, r);
            std::ofstream os(p, std::ios::binary | std::ios::trunc);
            report::write_csv(r, os);
        };
        render(p1);
        render(p2);
        auto slurp = [](const fs::path& p) {
            std::ifstream is(p, std::ios::binary);
            std::stringstream ss;
            ss << is.rdbuf();
            return ss.str();
        };
        const std::string a = slurp(p1), b = slurp(p2);
        fs::remove(p1);
        fs::remove(p2);
        add_verdict(rep, "deterministic-reports", !a.empty() && a == b,
                    "two renders of the same config are byte-identical");
    }
}

} // namespace detail_exp

struct ExperimentInfo {
    std::string name;
    std::string description;
    std::function<void(const Config&, report::RunReport&)> fn;
};

inline const std::vector<ExperimentInfo>& registry() {
    static const std::vector<ExperimentInfo> entries = {
        {"bcp-sweep",
         "Schatten partial sums for a symbol and its conjugate across a list of p",
         detail_exp::run_bcp_sweep},
        {"mo-decay", "mean oscillation of the conjugate counterexample along |z| stations",
         detail_exp::run_mo_decay},
        {"imo-integral", "ring-wise lattice integrals of MO_{2,r}^p with divergence flags",
         detail_exp::run_imo_integral},
        {"ida-check", "lattice G_{q,r} aggregates, outer-station spot checks, inner maximum",
         detail_exp::run_ida_check},
        {"entire-symbol", "entire symbols: vanishing G, closed-form MO growth, zero Hankel section",
         detail_exp::run_entire_symbol},
        {"compactness-probe", "translated projection residuals for shipped symbols",
         detail_exp::run_compactness_probe},
        {"validate", "cross-oracle fixtures and property suites; prints PASS (n/m checks)",
         detail_exp::run_validate},
    };
    return entries;
}

inline const ExperimentInfo* find_experiment(const std::string& name) {
    for (const auto& info : registry())
        if (info.name == name) return &info;
    return nullptr;
}

inline std::string default_out_path(const Config& cfg) {
    return cfg.experiment + (cfg.format == report::Format::csv ? "_report.csv" : "_report.json");
}

inline std::vector<std::pair<std::string, std::string>> config_echo(const Config& cfg) {
    using detail_exp::fmt;
    std::vector<std::pair<std::string, std::string>> echo;
    echo.emplace_back("experiment", cfg.experiment);
    if (!cfg.symbol_text.empty())
        echo.emplace_back("symbol", detail_exp::canonical_symbol(cfg.symbol_text));
    echo.emplace_back("weight", cfg.weight_text.empty() ? "classical" : cfg.weight_text);
    echo.emplace_back("N", std::to_string(cfg.domain_trunc));
    echo.emplace_back("M", std::to_string(cfg.proj_trunc));
    echo.emplace_back("K", std::to_string(cfg.spectrum_modes));
    if (!cfg.p_values.empty()) echo.emplace_back("p", detail_exp::join(cfg.p_values));
    echo.emplace_back("r", fmt(cfg.ball_radius));
    echo.emplace_back("q", fmt(cfg.inner_exponent));
    echo.emplace_back("D", std::to_string(cfg.degree));
    echo.emplace_back("delta", fmt(cfg.lattice_spacing));
    if (cfg.r_max > 0) echo.emplace_back("Rmax", fmt(cfg.r_max));
    if (!cfg.radii.empty()) echo.emplace_back("radii", detail_exp::join(cfg.radii));
    if (!cfg.lambdas.empty()) echo.emplace_back("lambdas", detail_exp::join(cfg.lambdas));
    echo.emplace_back("tol", fmt(cfg.tol));
    echo.emplace_back("seed", std::to_string(cfg.seed));
    echo.emplace_back("format", cfg.format == report::Format::csv ? "csv" : "json");
    return echo;
}

// Runs the experiment, writes the report to the output path, returns it.
inline report::RunReport run(const Config& cfg) {
    const ExperimentInfo* info = find_experiment(cfg.experiment);
    if (!info) throw UsageError("unknown experiment: " + cfg.experiment);
    if (!(cfg.tol > 0)) throw UsageError("tol must be positive");
    for (double p : cfg.p_values)
        if (!(p > 0)) throw UsageError("p values must be positive");

    report::RunReport rep;
    rep.config = config_echo(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    info->fn(cfg, rep);
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string path = cfg.out_path.empty() ? default_out_path(cfg) : cfg.out_path;
    report::write_report_file(rep, path, cfg.format);
    return rep;
}

} // namespace fhl::experiments
