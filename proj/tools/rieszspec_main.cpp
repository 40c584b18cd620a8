#include <CLI11.hpp>
#include <iostream>

#include "rieszspec/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitComputation = 3;

int do_validate(const std::string& path) {
    rieszspec::ExperimentConfig cfg = rieszspec::parse_config_file(path);
    rieszspec::FourierPotential pot = rieszspec::build_potential(cfg);
    std::cout << "config ok (hash " << cfg.config_hash << ")\n";
    for (const auto& w : pot.warnings()) std::cout << "warning: " << w << "\n";
    std::cout << "potential: " << rieszspec::to_string(pot.kind()) << " family " << pot.family()
              << " support bound " << pot.support_bound() << "\n";
    std::cout << rieszspec::effective_settings(cfg);
    return kExitOk;
}

int do_run(const std::string& path) {
    rieszspec::ExperimentConfig cfg = rieszspec::parse_config_file(path);
    rieszspec::RunResult res = rieszspec::run_experiment(cfg);
    for (const auto& [bc, r] : res.per_bc) std::cout << r.summary << "\n";
    for (const auto& f : res.files_written) std::cout << "wrote " << f << "\n";
    return kExitOk;
}

int do_compare(const std::vector<std::string>& paths) {
    rieszspec::CompareResult res = rieszspec::compare_reports(paths);
    std::cout << res.table;
    std::cout << (res.flagged ? "DRIFT detected in " + std::to_string(res.flagged) + " rows\n"
                              : "all quantities within trunc_tol\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra, Lyapunov-Schmidt functionals and Riesz-basis criteria for Hill and "
                 "1D Dirac operators with Fourier-specified potentials"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> report_paths;

    CLI::App* run = app.add_subcommand("run", "run an experiment config and write reports");
    run->add_option("config", config_path, "experiment config file")->required();

    CLI::App* validate = app.add_subcommand("validate", "parse and echo a config");
    validate->add_option("config", config_path, "experiment config file")->required();

    CLI::App* compare = app.add_subcommand("compare", "drift table between reports");
    compare->add_option("reports", report_paths, "report.json files (same potential)")
        ->required()
        ->expected(-2);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return do_run(config_path);
        if (validate->parsed()) return do_validate(config_path);
        if (compare->parsed()) return do_compare(report_paths);
    } catch (const rieszspec::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const rieszspec::PotentialError& e) {
        std::cerr << "potential error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitOk;
}
