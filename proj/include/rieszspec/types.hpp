#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rieszspec {

using Complex = std::complex<double>;

enum class PotentialKind { HillRegular, HillSingular, Dirac };
enum class OperatorKind { Hill, Dirac };
enum class BoundaryCondition { PerPlus, PerMinus, Dirichlet };
enum class BlockClass { M, M1, M2 };
enum class Verdict { Holds, Fails, Inconclusive };

std::string to_string(PotentialKind k);
std::string to_string(BoundaryCondition bc);
std::string to_string(BlockClass c);
std::string to_string(Verdict v);

// (real, imag) lexicographic order used everywhere an eigenvalue list is sorted.
inline bool complex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

struct PotentialError : std::runtime_error {
    explicit PotentialError(const std::string& what) : std::runtime_error(what) {}
};

struct ComputationError : std::runtime_error {
    explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical knobs shared by the discretization and criteria layers.  Every field
// has a documented default and is echoed into reports by the CLI layer.
struct Tolerances {
    double residual_tol = 1e-9;       // eigenpair residual bound, relative to ||A||
    double proj_tol = 1e-8;           // projector idempotency defect target
    int quad_points = 64;             // contour quadrature start, doubled up to the cap
    int quad_points_cap = 1024;
    double dist_tol_rel = 1e-2;       // min eigenvalue distance to a contour, relative to radius
    double jordan_rel = 1e-8;         // |gamma| <= jordan_rel*max(1,|lambda0|) means degenerate pair
    double m1m2_offdiag_tol = 1e-6;   // Jordan coupling threshold on the 2x2 compression
    double trunc_rel = 1e-6;          // accepted-block eigenvalue drift, relative to max(1,|lambda0|)
    double trunc_rel_singular = 1e-3; // same gate for H^-1 potentials (truncation converges ~1/cutoff)
    double series_tol = 1e-10;        // beta series convergence target
    double zero_tol = 1e-13;          // |beta| below this counts as zero in t_n branches
    double beta_floor = 1e-10;        // max(|b-|,|b+|) below this -> t_n carries no evidence
    double t_floor = 1e-3;            // two-sided magnitude window for criterion (7)
    double fund_slack = 1e-6;         // relative slack on the fundamental inequalities
    double xi_tol = 1e-6;             // xi relation residual, relative
    double bound_slack = 1e-6;        // gap bound slack
    double slope_tol = 0.5;           // |log-log trend slope| above this means divergence
    double divergence_threshold = 1e3;// magnitude ceiling for kappa / r / t evidence
    int min_blocks = 8;               // criteria (4),(5) need this many blocks in M
    int t_min_points = 4;             // criterion (7) needs this many informative t values
    int beta_order = 4;               // series order K
    int beta_band_factor = 4;         // band J = factor * n
    int lp_grid = 2048;               // uniform grid for the L1/Linf root-vector check
};

}  // namespace rieszspec
