//
// fhl: experiment harness for truncated Hankel operators on weighted Fock
// spaces. One subcommand per registered experiment; reports land in CSV or
// JSON files, stdout carries the report path, stderr the diagnostics.
//
// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage error,
// 3 numerical inconsistency.
//

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "fhl/detail/sum.hpp"
#include "fhl/errors.hpp"
#include "fhl/experiments.hpp"

namespace {

void add_common_options(CLI::App* sub, fhl::experiments::Config* cfg, std::string* format_text,
                        int* threads) {
    sub->add_option("--symbol", cfg->symbol_text, "symbol grammar text, e.g. xia or poly(0,1)");
    sub->add_option("--weight", cfg->weight_text,
                    "classical | gaussian:<alpha> | path to a weight spec file");
    sub->add_option("--N", cfg->domain_trunc, "domain truncation (columns 0..N)");
    sub->add_option("--M", cfg->proj_trunc, "projection truncation (rows 0..M)");
    sub->add_option("--K", cfg->spectrum_modes, "number of spectrum modes");
    sub->add_option("--p", cfg->p_values, "exponent list")->delimiter(',');
    sub->add_option("--r", cfg->ball_radius, "ball radius");
    sub->add_option("--q", cfg->inner_exponent, "inner exponent of the distance functional");
    sub->add_option("--D", cfg->degree, "approximating polynomial degree");
    sub->add_option("--delta", cfg->lattice_spacing, "lattice spacing");
    sub->add_option("--Rmax", cfg->r_max, "lattice truncation radius");
    sub->add_option("--radii", cfg->radii, "|z| stations (mo-decay)")->delimiter(',');
    sub->add_option("--lambdas", cfg->lambdas, "translations (compactness-probe)")
        ->delimiter(',');
    sub->add_option("--tol", cfg->tol, "numerical tolerance");
    sub->add_option("--out", cfg->out_path, "report path")->envname("FHL_OUT");
    sub->add_option("--format", *format_text, "csv | json")
        ->envname("FHL_FORMAT")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", cfg->seed, "seed for randomized property suites");
    sub->add_option("--threads", *threads, "worker threads for lattice sweeps")
        ->envname("FHL_THREADS");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for Hankel operators on weighted Fock spaces"};
    app.set_version_flag("--version", fhl::kVersion);
    app.require_subcommand(0, 1);

    bool list_only = false;
    CLI::App* list_cmd = app.add_subcommand("list", "list the registered experiments");
    list_cmd->callback([&] { list_only = true; });

    fhl::experiments::Config cfg;
    std::string format_text = "csv";
    int threads = 0;
    std::string chosen;
    for (const auto& info : fhl::experiments::registry()) {
        CLI::App* sub = app.add_subcommand(info.name, info.description);
        add_common_options(sub, &cfg, &format_text, &threads);
        sub->callback([&chosen, name = info.name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return 0;
        }
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }

    if (list_only) {
        for (const auto& info : fhl::experiments::registry())
            std::printf("%-18s %s\n", info.name.c_str(), info.description.c_str());
        return 0;
    }
    if (chosen.empty()) {
        std::fprintf(stderr, "usage: fhl <experiment> [options]; see 'fhl list'\n");
        return 2;
    }

    cfg.experiment = chosen;
    cfg.format = format_text == "json" ? fhl::report::Format::json : fhl::report::Format::csv;
    if (threads > 0) fhl::detail::set_thread_count(threads);

    try {
        const auto report = fhl::experiments::run(cfg);
        const std::string path =
            cfg.out_path.empty() ? fhl::experiments::default_out_path(cfg) : cfg.out_path;
        std::printf("%s\n", path.c_str());
        std::size_t passed = 0;
        for (const auto& v : report.verdicts)
            if (v.pass) ++passed;
        if (!report.verdicts.empty()) {
            std::fprintf(stderr, "%s (%zu/%zu checks)\n",
                         report.all_passed() ? "PASS" : "FAIL", passed,
                         report.verdicts.size());
            for (const auto& v : report.verdicts)
                if (!v.pass)
                    std::fprintf(stderr, "  failed: %s — %s\n", v.name.c_str(),
                                 v.detail.c_str());
        }
        return report.all_passed() ? 0 : 1;
    } catch (const fhl::UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const fhl::NumericalError& e) {
        std::fprintf(stderr, "numerical inconsistency: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
