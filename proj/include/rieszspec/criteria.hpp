#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rieszspec/beta.hpp"
#include "rieszspec/discretize.hpp"
#include "rieszspec/types.hpp"

namespace rieszspec {

/// Least-squares slope of log(val) against log(|n|); entries with val <= 0 or
/// non-finite are skipped.  Returns 0 when fewer than three points survive.
double loglog_slope(const std::vector<int>& ns, const std::vector<double>& vals);

std::pair<std::vector<Complex>, std::vector<Complex>> gaps_and_deviations(
    const std::vector<SpectralBlock>& blocks);

struct RatioResult {
    std::vector<int> ns;
    std::vector<double> r;        // |mu - lambda+| / |gamma|
    std::vector<double> r_alt;    // |mu - lambda-| / |gamma|, recorded for the audit
    double sup = 0.0;
};

/// Gesztesy-Tkachenko ratios over blocks in M; passing a block with gamma = 0
/// is an error.
RatioResult ratio_R(const std::vector<const SpectralBlock*>& m_blocks);

/// Two-sided boundedness verdict for the ratio sequence t_n(z*_n).
Verdict criterion_t(const std::vector<int>& ns, const std::vector<double>& ts,
                    const Tolerances& tol);

/// Boundedness verdict shared by criteria (4) and (5): needs min_blocks entries,
/// fails on magnitude above divergence_threshold or log-log slope above slope_tol.
Verdict bounded_verdict(const std::vector<int>& ns, const std::vector<double>& vals,
                        const Tolerances& tol);

/// Residuals of the fundamental inequalities r <= 6*kappa and kappa <= 16 + 72r.
std::pair<double, double> fundamental_check(double kappa_value, double r_value);

/// Consistency of xi = -(a/b) gamma against a direct application of the truncated
/// operator; returns the absolute residual.
double xi_relation_check(const SpectralBlock& block, const TruncatedOperator& op);

/// max|u| / mean|u| of the synthesized root function on a uniform grid
/// (the desk-scale shadow of the L-infinity vs L1 equivalence on 2D blocks).
double lp_ratio(const TruncatedOperator& op, const Eigen::VectorXcd& coeffs, int grid);

struct BlockRow {
    int n = 0;
    Complex gamma, delta, z_star, mu;
    BlockClass block_class = BlockClass::M1;
    bool accepted = false;
    double kappa = 1.0;                      // M blocks only (else 1)
    std::optional<double> r, r_alt;          // M blocks only
    std::optional<double> t;                 // from beta at z*
    bool t_informative = false;
    std::optional<double> xi;                // M2 blocks (Option 2)
    double deviation_norm = 0.0, projection_norm = 0.0;
    double fund_residual_1 = 0.0, fund_residual_2 = 0.0;
    double gap_residual = 0.0;
    bool beta_converged = false;
    double lp = 0.0;
};

struct CriterionReport {
    BoundaryCondition bc = BoundaryCondition::PerPlus;
    int n_star = 0;
    int dim_S = 0;
    std::vector<BlockRow> rows;              // one per assembled block, ordered by n
    Verdict verdict_kappa = Verdict::Inconclusive;    // condition (4)
    Verdict verdict_R = Verdict::Inconclusive;        // condition (5)
    Verdict verdict_t = Verdict::Inconclusive;        // condition (7)
    bool consistent = true;
    Verdict overall = Verdict::Inconclusive;
    double kappa_sup = 1.0, R_sup = 0.0;
    double t_slope = 0.0, kappa_slope = 0.0, r_slope = 0.0;
    double lp_sup = 0.0;
    double orlicz_c1 = 0.0;
    int blocks_in_M = 0;
    int informative_t = 0;
    int excluded_blocks = 0;
    std::vector<std::string> notes;
};

/// Assemble the per-block rows and the three Main-Theorem verdicts from an
/// assembled operator and the beta evaluations at z*_n.
CriterionReport consolidate(const BlockAssembly& assembly,
                            const std::map<int, BetaEval>& betas, const Tolerances& tol);

}  // namespace rieszspec
