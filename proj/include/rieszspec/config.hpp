#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rieszspec/potential.hpp"
#include "rieszspec/types.hpp"

namespace rieszspec {

inline constexpr const char* kToolVersion = "1.0.0";

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Experiment description parsed from a key/value text config.  See
/// tools/rieszspec_main.cpp or the README for the schema.
struct ExperimentConfig {
    PotentialKind kind = PotentialKind::HillRegular;
    std::string family = "table";   // table | zero | w_table | gasymov | delta_comb | dirac_table

    FourierPotential::CoeffList coeffs;    // family=table (order kept, duplicates allowed)
    FourierPotential::CoeffList w_coeffs;  // family=w_table
    int gasymov_cutoff = 0;
    std::vector<Complex> gasymov_c;        // constant when a single entry
    int comb_cutoff = 0;
    std::vector<double> comb_alpha;
    std::vector<Complex> comb_g;
    FourierPotential::CoeffList dirac_p, dirac_q;

    std::vector<BoundaryCondition> bcs{BoundaryCondition::PerPlus};
    int cutoff = 64;
    int window_min = 2;
    int window_max = 0;   // 0 = cutoff/2
    Tolerances tol;
    int parallelism = 0;
    std::uint64_t seed = 12345;
    int orlicz_samples = 50;
    std::string out_dir = "out";

    std::uint64_t config_hash = 0;

    int effective_window_max() const { return window_max > 0 ? window_max : cutoff / 2; }
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

FourierPotential build_potential(const ExperimentConfig& cfg);

/// The effective settings (defaults merged with overrides) as key = value lines;
/// embedded verbatim in every report.
std::string effective_settings(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace rieszspec
