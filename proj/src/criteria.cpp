#include "rieszspec/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rieszspec {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

double loglog_slope(const std::vector<int>& ns, const std::vector<double>& vals) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ns.size() && i < vals.size(); ++i) {
        if (!(vals[i] > 0.0) || !std::isfinite(vals[i]) || ns[i] == 0) continue;
        lx.push_back(std::log(std::abs(static_cast<double>(ns[i]))));
        ly.push_back(std::log(vals[i]));
    }
    if (lx.size() < 3) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double den = lx.size() * sxx - sx * sx;
    if (den <= 0) return 0.0;
    return (lx.size() * sxy - sx * sy) / den;
}

std::pair<std::vector<Complex>, std::vector<Complex>> gaps_and_deviations(
    const std::vector<SpectralBlock>& blocks) {
    std::vector<Complex> gam, del;
    gam.reserve(blocks.size());
    del.reserve(blocks.size());
    for (const auto& b : blocks) {
        gam.push_back(b.gamma);
        del.push_back(b.mu - (b.lambda_plus + b.lambda_minus) / 2.0);
    }
    return {gam, del};
}

RatioResult ratio_R(const std::vector<const SpectralBlock*>& m_blocks) {
    RatioResult res;
    for (const auto* b : m_blocks) {
        if (b->gamma == Complex(0.0)) {
            std::ostringstream os;
            os << "ratio_R: block n = " << b->n << " has gamma = 0";
            throw ComputationError(os.str());
        }
        res.ns.push_back(b->n);
        res.r.push_back(std::abs(b->mu - b->lambda_plus) / std::abs(b->gamma));
        res.r_alt.push_back(std::abs(b->mu - b->lambda_minus) / std::abs(b->gamma));
        res.sup = std::max(res.sup, res.r.back());
    }
    return res;
}

Verdict criterion_t(const std::vector<int>& ns, const std::vector<double>& ts,
                    const Tolerances& tol) {
    if (ts.empty()) return Verdict::Inconclusive;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double t : ts) {
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (hi <= tol.t_floor) return Verdict::Fails;               // t -> 0 across the window
    if (lo >= 1.0 / tol.t_floor) return Verdict::Fails;         // t -> infinity
    if (static_cast<int>(ts.size()) < tol.t_min_points) return Verdict::Inconclusive;
    const double slope = loglog_slope(ns, ts);
    if (std::abs(slope) > tol.slope_tol) return Verdict::Fails;
    if (lo >= tol.t_floor && hi <= 1.0 / tol.t_floor) return Verdict::Holds;
    return Verdict::Inconclusive;
}

Verdict bounded_verdict(const std::vector<int>& ns, const std::vector<double>& vals,
                        const Tolerances& tol) {
    if (static_cast<int>(vals.size()) < tol.min_blocks) return Verdict::Inconclusive;
    double sup = 0.0;
    for (double v : vals) sup = std::max(sup, v);
    if (!std::isfinite(sup) || sup > tol.divergence_threshold) return Verdict::Fails;
    if (loglog_slope(ns, vals) > tol.slope_tol) return Verdict::Fails;
    return Verdict::Holds;
}

std::pair<double, double> fundamental_check(double kappa_value, double r_value) {
    return {std::max(0.0, r_value - 6.0 * kappa_value),
            std::max(0.0, kappa_value - 16.0 - 72.0 * r_value)};
}

double xi_relation_check(const SpectralBlock& block, const TruncatedOperator& op) {
    if (block.block_class != BlockClass::M)
        throw ComputationError("xi_relation_check applies to blocks in M");
    const Eigen::VectorXcd& f = block.u_plus;
    const Eigen::VectorXcd& h = block.u_minus;
    const Complex ip = f.dot(h);   // <h, f>
    // rotate f so the overlap a = <h,f> is real nonnegative
    Eigen::VectorXcd f2 = std::polar(1.0, std::arg(ip)) * f;
    const double a = std::abs(ip);
    Eigen::VectorXcd phi = h - a * f2;
    const double b = phi.norm();
    if (b < 1e-10)
        throw ComputationError("xi_relation_check: near-parallel eigenvectors (b ~ 0)");
    phi /= b;
    const Complex xi_pred = -(a / b) * block.gamma;
    const Complex xi_direct = f2.dot(op.matrix * phi);
    return std::abs(xi_direct - xi_pred);
}

double lp_ratio(const TruncatedOperator& op, const Eigen::VectorXcd& coeffs, int grid) {
    const double pi = std::numbers::pi;
    double linf = 0.0, l1 = 0.0;
    const auto& ks = op.basis_indices;
    for (int g = 0; g < grid; ++g) {
        const double x = pi * (g + 0.5) / grid;
        double mag = 0.0;
        if (op.op_kind == OperatorKind::Hill) {
            Complex val(0.0);
            if (op.bc == BoundaryCondition::Dirichlet) {
                for (std::size_t i = 0; i < ks.size(); ++i)
                    val += coeffs(i) * std::sqrt(2.0) * std::sin(ks[i] * x);
            } else {
                for (std::size_t i = 0; i < ks.size(); ++i)
                    val += coeffs(i) * std::polar(1.0, ks[i] * x);
            }
            mag = std::abs(val);
        } else if (op.bc == BoundaryCondition::Dirichlet) {
            // reflected scalar u: y1(x) = u(x), y2(x) = u(-x)
            Complex y1(0.0), y2(0.0);
            for (std::size_t i = 0; i < ks.size(); ++i) {
                y1 += coeffs(i) * std::polar(1.0, -ks[i] * x);
                y2 += coeffs(i) * std::polar(1.0, ks[i] * x);
            }
            mag = std::sqrt(std::norm(y1) + std::norm(y2));
        } else {
            Complex y1(0.0), y2(0.0);
            for (std::size_t i = 0; i < ks.size(); ++i) {
                y1 += coeffs(2 * i) * std::polar(1.0, -ks[i] * x);
                y2 += coeffs(2 * i + 1) * std::polar(1.0, ks[i] * x);
            }
            mag = std::sqrt(std::norm(y1) + std::norm(y2));
        }
        linf = std::max(linf, mag);
        l1 += mag;
    }
    l1 /= grid;
    return l1 > 0 ? linf / l1 : 0.0;
}

CriterionReport consolidate(const BlockAssembly& assembly,
                            const std::map<int, BetaEval>& betas, const Tolerances& tol) {
    CriterionReport rep;
    rep.bc = assembly.op.bc;
    rep.n_star = assembly.loc.n_star;
    rep.dim_S = assembly.projections.dim_S;
    rep.excluded_blocks = assembly.excluded_blocks;

    std::vector<int> m_ns, t_ns;
    std::vector<double> kappas, rs, ts;
    int all_m1 = 0;

    for (const auto& b : assembly.blocks) {
        BlockRow row;
        row.n = b.n;
        row.gamma = b.gamma;
        row.z_star = b.z_star;
        row.mu = b.mu;
        row.delta = b.mu - (b.lambda_plus + b.lambda_minus) / 2.0;
        row.block_class = b.block_class;
        row.accepted = b.accepted;
        row.deviation_norm = b.deviation_norm;
        row.projection_norm = b.projection_norm;
        row.lp = std::max(lp_ratio(assembly.op, b.u_plus, tol.lp_grid),
                          lp_ratio(assembly.op, b.u_minus, tol.lp_grid));
        if (b.block_class == BlockClass::M1) ++all_m1;

        if (!b.accepted) {
            rep.rows.push_back(std::move(row));
            continue;
        }
        rep.lp_sup = std::max(rep.lp_sup, row.lp);

        if (b.block_class == BlockClass::M) {
            const double a = std::abs(b.u_plus.dot(b.u_minus));
            row.kappa = a >= 1.0 - 1e-14 ? std::numeric_limits<double>::infinity()
                                         : 1.0 / std::sqrt(1.0 - a * a);
            row.r = std::abs(b.mu - b.lambda_plus) / std::abs(b.gamma);
            row.r_alt = std::abs(b.mu - b.lambda_minus) / std::abs(b.gamma);
            auto [f1, f2] = fundamental_check(row.kappa, *row.r);
            row.fund_residual_1 = f1;
            row.fund_residual_2 = f2;
            m_ns.push_back(b.n);
            kappas.push_back(row.kappa);
            rs.push_back(*row.r);
        }
        auto itb = betas.find(b.n);
        if (itb != betas.end()) {
            const BetaEval& ev = itb->second;
            row.t = ev.t;
            row.beta_converged = ev.converged;
            row.t_informative =
                std::max(std::abs(ev.beta_minus), std::abs(ev.beta_plus)) > tol.beta_floor;
            row.gap_residual = std::max(
                0.0, std::abs(b.gamma) -
                         2.0 * (std::abs(ev.beta_minus) + std::abs(ev.beta_plus)));
            if (row.t_informative) {
                t_ns.push_back(b.n);
                ts.push_back(ev.t);
            }
        }
        rep.rows.push_back(std::move(row));
    }

    rep.blocks_in_M = static_cast<int>(m_ns.size());
    rep.informative_t = static_cast<int>(t_ns.size());
    for (double k : kappas) rep.kappa_sup = std::max(rep.kappa_sup, k);
    for (double r : rs) rep.R_sup = std::max(rep.R_sup, r);
    rep.kappa_slope = loglog_slope(m_ns, kappas);
    rep.r_slope = loglog_slope(m_ns, rs);
    rep.t_slope = loglog_slope(t_ns, ts);

    rep.verdict_kappa = bounded_verdict(m_ns, kappas, tol);
    rep.verdict_R = bounded_verdict(m_ns, rs, tol);
    rep.verdict_t = criterion_t(t_ns, ts, tol);

    const bool has_holds = rep.verdict_kappa == Verdict::Holds ||
                           rep.verdict_R == Verdict::Holds || rep.verdict_t == Verdict::Holds;
    const bool has_fails = rep.verdict_kappa == Verdict::Fails ||
                           rep.verdict_R == Verdict::Fails || rep.verdict_t == Verdict::Fails;
    rep.consistent = !(has_holds && has_fails);
    if (!rep.consistent) rep.overall = Verdict::Inconclusive;
    else if (has_fails) rep.overall = Verdict::Fails;
    else if (has_holds) rep.overall = Verdict::Holds;
    else rep.overall = Verdict::Inconclusive;

    if (m_ns.empty()) {
        rep.notes.push_back(all_m1 == static_cast<int>(assembly.blocks.size())
                                ? "M empty: every block is M1 (orthogonal pairs), "
                                  "the block system is trivially a Riesz system"
                                : "M empty: no simple-pair blocks in the window");
    }
    if (static_cast<int>(m_ns.size()) < tol.min_blocks && !m_ns.empty()) {
        std::ostringstream os;
        os << "window too short for criteria (4)/(5): " << m_ns.size() << " blocks in M, need "
           << tol.min_blocks;
        rep.notes.push_back(os.str());
    }
    return rep;
}

}  // namespace rieszspec
