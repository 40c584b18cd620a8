#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "rieszspec/potential.hpp"
#include "rieszspec/types.hpp"

namespace rieszspec {

/// Mode indices of Gamma_bc intersected with |n| <= cutoff.
/// Hill: {0} u 2N / 2N-1 / N.  Dirac: 2Z / 1+2Z / Z.
std::vector<int> index_set(BoundaryCondition bc, OperatorKind op, int cutoff);

struct TruncatedOperator {
    OperatorKind op_kind;
    PotentialKind pot_kind;
    BoundaryCondition bc;
    int cutoff = 0;
    /// Mode indices in basis order.  Hill Per: exponential modes k, descending.
    /// Hill Dir: sine indices 1..cutoff.  Dirac Per: modes n descending, each
    /// spanning two basis columns (e1_n, e2_n).  Dirac Dir: reflected exponential
    /// modes k, descending.
    std::vector<int> basis_indices;
    Eigen::MatrixXcd matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
    double lambda0(int n) const {
        return op_kind == OperatorKind::Hill ? static_cast<double>(n) * n
                                             : static_cast<double>(n);
    }
    /// Columns of the basis that span the free eigenspace of index n.
    std::vector<int> free_block_columns(int n) const;
};

TruncatedOperator build_matrix(const FourierPotential& pot, BoundaryCondition bc, int cutoff);

struct EigenPair {
    Complex value;
    Eigen::VectorXcd vector;
    double residual;
};

/// All eigenpairs of the dense matrix, sorted by (Re, Im).  Residuals are
/// ||Av - lambda v|| / ||A||_F per pair.
std::vector<EigenPair> eigensolve(const TruncatedOperator& op,
                                  const Tolerances& tol = Tolerances());

struct Localization {
    int n_star = 0;
    double box_half_side = 0.0;
    /// n -> sorted eigenvalue indices in its disc (two for Per, one for Dirichlet).
    std::map<int, std::vector<int>> assignment;
    int inside_box = 0;   // eigenvalues assigned to Pi_{N*}
};

/// Smallest even N* realizing the disc picture; throws ComputationError when no
/// N* below cutoff/2 works.  Disc radii: Hill L2 N*/2, Hill H^-1 n/4, Dirac 1/4.
Localization localize(const std::vector<EigenPair>& eigs, const TruncatedOperator& op);

double disc_radius(const TruncatedOperator& op, int n_star, int n);

struct QuadratureInfo {
    int points = 0;
    double idempotency_defect = 0.0;
};

/// Contour Riesz projection (1/2pi i) oint (z-L)^{-1} dz over a circle, by
/// trapezoid quadrature with point doubling until the idempotency defect is
/// below proj_tol.  Pass the eigenvalue list to enforce the contour-distance
/// precondition.
Eigen::MatrixXcd riesz_projection(const TruncatedOperator& op, Complex center, double radius,
                                  int quad_points, const Tolerances& tol = Tolerances(),
                                  const std::vector<EigenPair>* eigs = nullptr,
                                  QuadratureInfo* info = nullptr);

/// Same integral over the boundary of the square |x|,|y| < half_side
/// (Gauss-Legendre per edge, doubled until idempotent).
Eigen::MatrixXcd riesz_projection_box(const TruncatedOperator& op, double half_side,
                                      int points_per_edge, const Tolerances& tol = Tolerances(),
                                      const std::vector<EigenPair>* eigs = nullptr,
                                      QuadratureInfo* info = nullptr);

/// Orthogonal projection onto the free eigenspace of index n.
Eigen::MatrixXcd free_projection(const TruncatedOperator& op, int n);

struct SpectralBlock {
    int n = 0;
    Complex lambda_minus, lambda_plus;
    Complex gamma;        // lambda_plus - lambda_minus
    Complex z_star;       // (l- + l+)/2 - lambda0
    Complex mu;           // Dirichlet eigenvalue paired to n
    Eigen::VectorXcd u_minus, u_plus;   // Option-1 unit vectors
    BlockClass block_class = BlockClass::M1;
    Complex compression_offdiag;        // Jordan coupling of the 2x2 compression
    double deviation_norm = 0.0;        // ||P_n - P_n^0||_2
    double projection_norm = 0.0;       // ||P_n||_2
    double idempotency_defect = 0.0;
    double eig_residual = 0.0;
    double drift = 0.0;                 // eigenvalue movement cutoff -> 2*cutoff
    bool accepted = false;
};

struct ProjectionSystem {
    std::map<int, Eigen::MatrixXcd> P;
    std::map<int, Eigen::MatrixXcd> P0;
    std::map<int, int> ranks;
    std::map<int, double> deviation_norms;
    Eigen::MatrixXcd S_nstar;
    int dim_S = 0;
};

struct BlockAssembly {
    TruncatedOperator op;
    std::vector<EigenPair> eigs;
    Localization loc;
    std::vector<SpectralBlock> blocks;
    ProjectionSystem projections;
    std::vector<Complex> dirichlet_eigs;
    int excluded_blocks = 0;   // blocks dropped by the truncation-drift gate
};

/// Full per-index pipeline for Per+/Per-: eigensolve, localization, Dirichlet
/// pairing, contour projections, block classification and Option-1 vectors,
/// validated against a run at 2*cutoff.  Per-n work runs on `threads` workers.
BlockAssembly assemble_blocks(const FourierPotential& pot, BoundaryCondition bc, int cutoff,
                              const Tolerances& tol = Tolerances(), int threads = 0);

/// Option-2 associated vector for an M2 block: solves (L - lambda) u = u_plus with
/// u orthogonal to u_plus; returns (u, xi) with xi = 1/||u|| before renormalization.
std::pair<Eigen::VectorXcd, double> option2_vectors(const SpectralBlock& block,
                                                    const TruncatedOperator& op);

}  // namespace rieszspec
