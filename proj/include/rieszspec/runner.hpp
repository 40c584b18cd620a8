#pragma once

#include <map>
#include <string>
#include <vector>

#include "rieszspec/config.hpp"
#include "rieszspec/criteria.hpp"

namespace rieszspec {

struct DirichletSummary {
    int n_star = 0;
    int dim_S = 0;
    std::map<int, int> ranks;   // dim P_n over the window
};

struct BcResult {
    CriterionReport report;
    std::map<int, double> xi;              // Option-2 xi per M2 block
    double orlicz_c1 = 0.0;
    int orlicz_worst_sample = -1;
    bool bari_markus_decreasing = false;   // L2 Hill potentials only
    double bari_markus_tail_fraction = 0.0;
    std::string summary;
};

struct RunResult {
    std::map<BoundaryCondition, BcResult> per_bc;
    std::map<BoundaryCondition, DirichletSummary> dirichlet;
    std::vector<std::string> files_written;
};

/// Full experiment: assemble every requested boundary condition, evaluate the
/// beta functionals at z*_n, consolidate the criteria, and write
/// report.json / plots_<bc>.tsv / summary.txt under cfg.out_dir.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Same computation without touching the filesystem (used by tests).
RunResult run_in_memory(const ExperimentConfig& cfg);

struct CompareRow {
    int n = 0;
    std::string quantity;
    double drift = 0.0;
    bool flagged = false;
};

struct CompareResult {
    std::vector<CompareRow> rows;
    int flagged = 0;
    std::string table;   // rendered text table
};

/// Per-quantity drift between reports of the same potential at different
/// cutoffs; rows above trunc_tol are flagged.  Mismatched windows are an error.
CompareResult compare_reports(const std::vector<std::string>& report_paths);

}  // namespace rieszspec
