// Scenario-driven verification front end.
//
//   gskit run <scenario.json> [--jobs N] [--seed S] [--out DIR] [--list]
//                             [--budget-scale F]
//
// Exit codes: 0 all jobs pass, 1 at least one verification failed,
// 2 configuration error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gskit/gskit.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Weight-family calculus and Fourier-isomorphism verification toolkit"};
    app.require_subcommand(1);

    std::string scenario_file;
    int jobs = 1;
    unsigned long seed = 0;
    bool seed_set = false;
    std::string out_dir;
    bool list_only = false;
    double budget_scale = 1.0;

    CLI::App* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("file", scenario_file, "scenario JSON file")->required();
    run->add_option("--jobs", jobs, "worker threads (default 1)");
    run->add_option("--seed", seed, "override the scenario PRNG seed")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--out", out_dir, "output directory (overrides scenario)");
    run->add_flag("--list", list_only, "list job ids without executing");
    run->add_option("--budget-scale", budget_scale,
                    "multiply all truncation budgets (convergence studies)");

    CLI11_PARSE(app, argc, argv);

    try {
        gskit::Scenario sc = gskit::load_scenario(scenario_file);
        if (seed_set) {
            sc.seed = seed;
            sc.options.seed = seed;
        }
        if (!out_dir.empty()) sc.output_dir = out_dir;

        if (list_only) {
            for (const auto& job : sc.jobs) std::cout << job.id << '\n';
            return 0;
        }
        const int rc = gskit::run_scenario(sc, sc.output_dir, jobs, budget_scale);
        if (rc != 0) std::cerr << "gskit: at least one job failed; see summary.csv\n";
        return rc;
    } catch (const gskit::Error& e) {
        if (e.kind() == "config-error") {
            std::cerr << "gskit: " << e.what() << '\n';
            return 2;
        }
        std::cerr << "gskit: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "gskit: " << e.what() << '\n';
        return 2;
    }
}
