#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rieszspec/types.hpp"

namespace rieszspec {

/// Paper-convention inner product: linear in the first argument.
inline Complex inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return b.dot(a);
}

struct BlockPair {
    Eigen::VectorXcd u1, u2;
    Complex inner_product;
    double kappa;
};

BlockPair make_block_pair(const Eigen::VectorXcd& u1, const Eigen::VectorXcd& u2);

/// (1 - |<u1,u2>|^2)^{-1/2}; +inf for a degenerate pair.  Inputs must be unit
/// vectors within 1e-10.
double kappa(const Eigen::VectorXcd& u1, const Eigen::VectorXcd& u2);

/// Biorthogonal functionals on span{u1,u2}, represented as vectors acting by
/// the inner product: psi_i(h) = <h, psi_i>, psi_i(u_j) = delta_ij.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> biorthogonal_2d(const Eigen::VectorXcd& u1,
                                                              const Eigen::VectorXcd& u2);

struct OrliczResult {
    double c1 = 1.0;
    int worst_sample = -1;
};

/// Smallest C1 over the samples with (1/C1^2)||y||^2 <= sum ||Q_m y||^2 <= C1^2 ||y||^2.
/// The projections must be mutually annihilating within 1e-8.
OrliczResult orlicz_check(const std::vector<Eigen::MatrixXcd>& projections,
                          const std::vector<Eigen::VectorXcd>& samples);

struct BasisBoundResult {
    double sup_q_norm = 1.0;
    double slope = 0.0;          // log kappa vs log position trend
    bool bounded = true;
};

/// sup_j ||u_j||*||psi_j|| over the blocks (= kappa for normalized pairs) with the
/// finite-window evidence rule: bounded iff the sup stays under the divergence
/// threshold and the trend slope under slope_tol.
BasisBoundResult basis_bound_check(const std::vector<BlockPair>& blocks,
                                   double divergence_threshold = 1e3, double slope_tol = 0.5);

}  // namespace rieszspec
