#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "m3s/errors.hpp"
#include "m3s/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"numerical verification of the mixed 3-structure on the pseudo-sphere"};
    m3s::SuiteConfig cfg;
    std::string format = "json";
    std::string out_path;

    app.add_option("--n", cfg.n, "quaternionic size; the surface has dimension 4n+3")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "base seed for all sampling")->capture_default_str();
    app.add_option("--samples", cfg.samples, "surface points per check")->capture_default_str();
    app.add_option("--probes", cfg.probes, "tangent probes per point")->capture_default_str();
    app.add_option("--tol", cfg.tol, "base tolerance; per-check tolerances scale with tol/1e-6")
        ->capture_default_str();
    app.add_option("--fd-step", cfg.fd_step, "finite-difference step")->capture_default_str();
    app.add_option("--suite", cfg.suites,
                   "run only the named suites (repeatable); default runs all");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    app.add_option("--out", out_path, "write the report to a file instead of stdout");
    app.add_flag("--exhaustive", cfg.exhaustive,
                 "contract low-rank identities against full frames instead of sampling");
    app.add_flag("--inject-fault", cfg.inject_fault,
                 "perturb eta_1 to demonstrate that the checks can fail");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const m3s::Report rep = m3s::run_suites(cfg);
        const std::string body = format == "json" ? m3s::to_json(rep) : m3s::to_text(rep);
        if (out_path.empty()) {
            std::cout << body;
        } else {
            std::ofstream of(out_path);
            if (!of) {
                std::cerr << "cannot open " << out_path << " for writing\n";
                return 2;
            }
            of << body;
        }
        return m3s::exit_code(rep);
    } catch (const m3s::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const m3s::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
