#include "rieszspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rieszspec {

namespace {

void require_unit(const Eigen::VectorXcd& u, const char* name) {
    if (std::abs(u.norm() - 1.0) > 1e-10) {
        std::ostringstream os;
        os << name << " is not normalized: ||u|| = " << u.norm();
        throw ComputationError(os.str());
    }
}

}  // namespace

double kappa(const Eigen::VectorXcd& u1, const Eigen::VectorXcd& u2) {
    require_unit(u1, "u1");
    require_unit(u2, "u2");
    const double a = std::abs(inner(u1, u2));
    if (a >= 1.0 - 1e-14) return std::numeric_limits<double>::infinity();
    return 1.0 / std::sqrt(1.0 - a * a);
}

BlockPair make_block_pair(const Eigen::VectorXcd& u1, const Eigen::VectorXcd& u2) {
    BlockPair bp;
    bp.u1 = u1;
    bp.u2 = u2;
    bp.inner_product = inner(u1, u2);
    bp.kappa = kappa(u1, u2);
    return bp;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> biorthogonal_2d(const Eigen::VectorXcd& u1,
                                                              const Eigen::VectorXcd& u2) {
    if (!std::isfinite(kappa(u1, u2)))
        throw ComputationError("biorthogonal_2d: degenerate pair (|<u1,u2>| = 1)");
    // psi = a u1 + b u2 with <u_j, psi> = delta.  The inner product is
    // conjugate-linear in psi, so the Gram system solves for the conjugated
    // coefficients: [1, <u1,u2>; <u2,u1>, 1] [conj a; conj b] = e_j.
    const Complex g12 = inner(u1, u2);
    Eigen::Matrix2cd M;
    M << Complex(1.0), g12, std::conj(g12), Complex(1.0);
    Eigen::Vector2cd e1(1.0, 0.0), e2(0.0, 1.0);
    Eigen::Vector2cd c1 = M.colPivHouseholderQr().solve(e1).conjugate();
    Eigen::Vector2cd c2 = M.colPivHouseholderQr().solve(e2).conjugate();
    Eigen::VectorXcd psi1 = c1(0) * u1 + c1(1) * u2;
    Eigen::VectorXcd psi2 = c2(0) * u1 + c2(1) * u2;
    return {psi1, psi2};
}

OrliczResult orlicz_check(const std::vector<Eigen::MatrixXcd>& projections,
                          const std::vector<Eigen::VectorXcd>& samples) {
    for (std::size_t i = 0; i < projections.size(); ++i)
        for (std::size_t j = i + 1; j < projections.size(); ++j) {
            const double cross = (projections[i] * projections[j]).norm();
            if (cross > 1e-8) {
                std::ostringstream os;
                os << "orlicz_check: projections " << i << " and " << j
                   << " overlap (||QiQj|| = " << cross << ")";
                throw ComputationError(os.str());
            }
        }
    OrliczResult res;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const double ny = samples[s].norm();
        if (ny == 0.0) continue;
        double sum2 = 0.0;
        for (const auto& Q : projections) sum2 += (Q * samples[s]).squaredNorm();
        const double ratio = std::sqrt(sum2) / ny;
        const double c = std::max(ratio, 1.0 / ratio);
        if (c > res.c1) {
            res.c1 = c;
            res.worst_sample = static_cast<int>(s);
        }
    }
    return res;
}

BasisBoundResult basis_bound_check(const std::vector<BlockPair>& blocks,
                                   double divergence_threshold, double slope_tol) {
    BasisBoundResult res;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const double k = blocks[i].kappa;
        res.sup_q_norm = std::max(res.sup_q_norm, k);
        if (std::isfinite(k) && k > 0) {
            lx.push_back(std::log(static_cast<double>(i + 1)));
            ly.push_back(std::log(k));
        }
    }
    if (lx.size() >= 3) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        const double num = lx.size() * sxy - sx * sy;
        const double den = lx.size() * sxx - sx * sx;
        if (den > 0) res.slope = num / den;
    }
    res.bounded =
        std::isfinite(res.sup_q_norm) && res.sup_q_norm < divergence_threshold && res.slope <= slope_tol;
    return res;
}

}  // namespace rieszspec
