#include "rieszspec/discretize.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace rieszspec {

std::string to_string(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::PerPlus: return "per+";
        case BoundaryCondition::PerMinus: return "per-";
        case BoundaryCondition::Dirichlet: return "dir";
    }
    return "?";
}

std::string to_string(BlockClass c) {
    switch (c) {
        case BlockClass::M: return "M";
        case BlockClass::M1: return "M1";
        case BlockClass::M2: return "M2";
    }
    return "?";
}

namespace {

constexpr double kPi = std::numbers::pi;

// integral of e^{ikx} over the half period [0, pi]
Complex half_integral(int k) {
    if (k == 0) return Complex(kPi, 0.0);
    if (k % 2 == 0) return Complex(0.0);
    return Complex(0.0, 2.0 / k);
}

template <typename F>
void parallel_for(int count, int threads, F&& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::scoped_lock lk(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double p0, p1;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = t;
            for (int k = 1; k < n; ++k) {
                double p2 = ((2 * k + 1) * t * p1 - k * p0) / (k + 1);
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = t;
        for (int k = 1; k < n; ++k) {
            double p2 = ((2 * k + 1) * t * p1 - k * p0) / (k + 1);
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[n - 1 - i] = t;
        x[i] = -t;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

double matrix_norm2(const Eigen::MatrixXcd& m) {
    // largest singular value
    return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

}  // namespace

std::vector<int> index_set(BoundaryCondition bc, OperatorKind op, int cutoff) {
    std::vector<int> out;
    if (op == OperatorKind::Hill) {
        switch (bc) {
            case BoundaryCondition::PerPlus:
                for (int n = 0; n <= cutoff; n += 2) out.push_back(n);
                break;
            case BoundaryCondition::PerMinus:
                for (int n = 1; n <= cutoff; n += 2) out.push_back(n);
                break;
            case BoundaryCondition::Dirichlet:
                for (int n = 1; n <= cutoff; ++n) out.push_back(n);
                break;
        }
    } else {
        int start = bc == BoundaryCondition::PerMinus ? 1 : 0;
        int step = bc == BoundaryCondition::Dirichlet ? 1 : 2;
        if (bc == BoundaryCondition::Dirichlet) start = 0;
        for (int n = -cutoff; n <= cutoff; ++n)
            if ((n - start) % step == 0) out.push_back(n);
    }
    return out;
}

std::vector<int> TruncatedOperator::free_block_columns(int n) const {
    std::vector<int> cols;
    if (op_kind == OperatorKind::Hill) {
        if (bc == BoundaryCondition::Dirichlet) {
            for (int i = 0; i < static_cast<int>(basis_indices.size()); ++i)
                if (basis_indices[i] == n) cols.push_back(i);
        } else {
            for (int i = 0; i < static_cast<int>(basis_indices.size()); ++i)
                if (std::abs(basis_indices[i]) == std::abs(n)) cols.push_back(i);
        }
    } else {
        if (bc == BoundaryCondition::Dirichlet) {
            for (int i = 0; i < static_cast<int>(basis_indices.size()); ++i)
                if (basis_indices[i] == n) cols.push_back(i);
        } else {
            for (int i = 0; i < static_cast<int>(basis_indices.size()); ++i)
                if (basis_indices[i] == n) {
                    cols.push_back(2 * i);
                    cols.push_back(2 * i + 1);
                }
        }
    }
    return cols;
}

namespace {

std::vector<int> per_modes(BoundaryCondition bc, int cutoff) {
    int par = bc == BoundaryCondition::PerPlus ? 0 : 1;
    std::vector<int> ks;
    for (int k = cutoff; k >= -cutoff; --k)
        if (std::abs(k % 2) == par) ks.push_back(k);
    return ks;
}

TruncatedOperator build_hill_per(const FourierPotential& pot, BoundaryCondition bc, int cutoff) {
    TruncatedOperator op;
    op.op_kind = OperatorKind::Hill;
    op.pot_kind = pot.kind();
    op.bc = bc;
    op.cutoff = cutoff;
    op.basis_indices = per_modes(bc, cutoff);
    const auto& ks = op.basis_indices;
    const int d = static_cast<int>(ks.size());
    pot.ensure_window(ks.empty() ? 0 : ks.front() - ks.back());
    op.matrix = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        op.matrix(i, i) = Complex(static_cast<double>(ks[i]) * ks[i], 0.0) + pot.v(0);
        for (int j = 0; j < d; ++j)
            if (i != j) op.matrix(i, j) = pot.v(ks[i] - ks[j]);
    }
    return op;
}

TruncatedOperator build_hill_dir(const FourierPotential& pot, int cutoff) {
    TruncatedOperator op;
    op.op_kind = OperatorKind::Hill;
    op.pot_kind = pot.kind();
    op.bc = BoundaryCondition::Dirichlet;
    op.cutoff = cutoff;
    for (int n = 1; n <= cutoff; ++n) op.basis_indices.push_back(n);
    pot.ensure_window(2 * cutoff);
    op.matrix = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    // <v s_m, s_n> in the orthonormal sine basis s_n = sqrt2 sin nx under (1/pi) int_0^pi.
    // Even potential index j couples sine modes of both parities through the
    // half-period integrals; same-parity terms reduce to Kronecker deltas.
    for (int a = 0; a < cutoff; ++a) {
        const int n = a + 1;
        for (int b = 0; b < cutoff; ++b) {
            const int m = b + 1;
            Complex val(0.0);
            const int p1 = m - n, p2 = m + n;
            for (const auto& [j, Vj] : pot.v_table()) {
                if (Vj == Complex(0.0)) continue;
                val += Vj * (half_integral(j + p1) + half_integral(j - p1)
                             - half_integral(j + p2) - half_integral(j - p2));
            }
            op.matrix(a, b) = val / (2.0 * kPi);
        }
        op.matrix(a, a) += Complex(static_cast<double>(n) * n, 0.0);
    }
    return op;
}

TruncatedOperator build_dirac_per(const FourierPotential& pot, BoundaryCondition bc, int cutoff) {
    TruncatedOperator op;
    op.op_kind = OperatorKind::Dirac;
    op.pot_kind = pot.kind();
    op.bc = bc;
    op.cutoff = cutoff;
    op.basis_indices = per_modes(bc, cutoff);
    const auto& ns = op.basis_indices;
    const int d = static_cast<int>(ns.size());
    op.matrix = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    // basis order e1_{n_0}, e2_{n_0}, e1_{n_1}, ...; coupling v e1_n = Q e^{-inx} in the
    // second component, v e2_n = P e^{inx} in the first.
    for (int i = 0; i < d; ++i) {
        op.matrix(2 * i, 2 * i) = Complex(ns[i], 0.0);
        op.matrix(2 * i + 1, 2 * i + 1) = Complex(ns[i], 0.0);
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            op.matrix(2 * j + 1, 2 * i) += pot.q(ns[j] + ns[i]);
            op.matrix(2 * j, 2 * i + 1) += pot.p(-(ns[j] + ns[i]));
        }
    return op;
}

TruncatedOperator build_dirac_dir(const FourierPotential& pot, int cutoff) {
    // Reflection reduction: u(x) = y1(x) on (0,pi), y2(-x) on (-pi,0) turns the
    // Dirichlet Dirac problem into i u' + R(x) u(-x) = lambda u on the circle,
    // R = P on (0,pi) and Q(-x) on (-pi,0); free spectrum Z, simple.
    TruncatedOperator op;
    op.op_kind = OperatorKind::Dirac;
    op.pot_kind = pot.kind();
    op.bc = BoundaryCondition::Dirichlet;
    op.cutoff = cutoff;
    for (int k = cutoff; k >= -cutoff; --k) op.basis_indices.push_back(k);
    const auto& ks = op.basis_indices;
    const int d = static_cast<int>(ks.size());
    op.matrix = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) op.matrix(i, i) = Complex(ks[i], 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const int s = ks[j] + ks[i];
            Complex val(0.0);
            for (const auto& [m, Pm] : pot.p_table()) val += Pm * half_integral(m + s);
            for (const auto& [m, Qm] : pot.q_table()) val += Qm * half_integral(m - s);
            op.matrix(j, i) += val / (2.0 * kPi);
        }
    return op;
}

}  // namespace

TruncatedOperator build_matrix(const FourierPotential& pot, BoundaryCondition bc, int cutoff) {
    if (cutoff < 8) throw ComputationError("build_matrix: cutoff must be >= 8");
    if (pot.kind() == PotentialKind::Dirac) {
        return bc == BoundaryCondition::Dirichlet ? build_dirac_dir(pot, cutoff)
                                                  : build_dirac_per(pot, bc, cutoff);
    }
    return bc == BoundaryCondition::Dirichlet ? build_hill_dir(pot, cutoff)
                                              : build_hill_per(pot, bc, cutoff);
}

std::vector<EigenPair> eigensolve(const TruncatedOperator& op, const Tolerances& tol) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(op.matrix, true);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eigensolve failed to converge (dim " << op.dim() << ", info "
           << static_cast<int>(solver.info()) << ")";
        throw ComputationError(os.str());
    }
    const double scale = op.matrix.norm();
    std::vector<EigenPair> out(op.dim());
    for (int i = 0; i < op.dim(); ++i) {
        out[i].value = solver.eigenvalues()(i);
        out[i].vector = solver.eigenvectors().col(i);
        double nv = out[i].vector.norm();
        if (nv > 0) out[i].vector /= nv;
        out[i].residual =
            (op.matrix * out[i].vector - out[i].value * out[i].vector).norm() / scale;
    }
    std::sort(out.begin(), out.end(),
              [](const EigenPair& a, const EigenPair& b) { return complex_less(a.value, b.value); });
    for (const auto& p : out)
        if (p.residual > tol.residual_tol) {
            std::ostringstream os;
            os << "eigenpair residual " << p.residual << " above tolerance " << tol.residual_tol
               << " at eigenvalue " << p.value;
            throw ComputationError(os.str());
        }
    return out;
}

double disc_radius(const TruncatedOperator& op, int n_star, int n) {
    if (op.op_kind == OperatorKind::Dirac) return 0.25;
    return op.pot_kind == PotentialKind::HillSingular ? std::abs(n) / 4.0 : n_star / 2.0;
}

namespace {

double box_half_side(const TruncatedOperator& op, int n_star) {
    return op.op_kind == OperatorKind::Hill
               ? static_cast<double>(n_star) * n_star + 0.5 * n_star
               : n_star + 0.25;
}

std::vector<int> localization_indices(const TruncatedOperator& op, int n_star, int max_abs) {
    // members of Gamma_bc with |n| > n_star up to max_abs, by increasing |n|
    std::vector<int> ns;
    const bool dirac = op.op_kind == OperatorKind::Dirac;
    for (int a = n_star + 1; a <= max_abs; ++a) {
        bool in = false;
        switch (op.bc) {
            case BoundaryCondition::PerPlus: in = a % 2 == 0; break;
            case BoundaryCondition::PerMinus: in = a % 2 == 1; break;
            case BoundaryCondition::Dirichlet: in = true; break;
        }
        if (!in) continue;
        if (dirac) {
            ns.push_back(-a);
            ns.push_back(a);
        } else {
            ns.push_back(a);
        }
    }
    return ns;
}

}  // namespace

Localization localize(const std::vector<EigenPair>& eigs, const TruncatedOperator& op) {
    const int want = op.bc == BoundaryCondition::Dirichlet ? 1 : 2;
    const int n_exact = op.cutoff / 2;
    for (int n_star = 2; n_star <= op.cutoff / 2; n_star += 2) {
        const double half = box_half_side(op, n_star);
        std::vector<bool> used(eigs.size(), false);
        std::map<int, std::vector<int>> assign;
        bool ok = true;
        for (int n : localization_indices(op, n_star, op.cutoff)) {
            const double c = op.lambda0(n);
            const double r = disc_radius(op, n_star, n);
            std::vector<int> idx;
            for (int i = 0; i < static_cast<int>(eigs.size()); ++i)
                if (std::abs(eigs[i].value - c) < r) idx.push_back(i);
            if (std::abs(n) <= n_exact && static_cast<int>(idx.size()) != want) {
                ok = false;
                break;
            }
            for (int i : idx) {
                if (used[i]) { ok = false; break; }
                used[i] = true;
            }
            if (!ok) break;
            if (std::abs(n) <= n_exact) assign[n] = idx;
        }
        if (!ok) continue;
        int inside = 0;
        for (int i = 0; i < static_cast<int>(eigs.size()); ++i) {
            if (used[i]) continue;
            const Complex z = eigs[i].value;
            if (std::abs(z.real()) < half && std::abs(z.imag()) < half) {
                ++inside;
            } else {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        Localization loc;
        loc.n_star = n_star;
        loc.box_half_side = half;
        loc.assignment = std::move(assign);
        loc.inside_box = inside;
        return loc;
    }
    throw ComputationError("localization failed at this truncation (no N* below cutoff/2)");
}

namespace {

Eigen::MatrixXcd resolvent_sum_circle(const TruncatedOperator& op, Complex center, double radius,
                                      int points) {
    const int d = op.dim();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    for (int t = 0; t < points; ++t) {
        const double th = 2.0 * kPi * t / points;
        const Complex e = std::polar(1.0, th);
        const Complex z = center + radius * e;
        acc += e * (z * id - op.matrix).partialPivLu().solve(id);
    }
    return acc * (radius / points);
}

Eigen::MatrixXcd resolvent_sum_box(const TruncatedOperator& op, double half, int per_edge) {
    const int d = op.dim();
    std::vector<double> x, w;
    gauss_legendre(per_edge, x, w);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    const Complex corners[5] = {Complex(half, -half), Complex(half, half), Complex(-half, half),
                                Complex(-half, -half), Complex(half, -half)};
    for (int e = 0; e < 4; ++e) {
        const Complex mid = (corners[e] + corners[e + 1]) / 2.0;
        const Complex h2 = (corners[e + 1] - corners[e]) / 2.0;
        for (int t = 0; t < per_edge; ++t) {
            const Complex z = mid + h2 * x[t];
            acc += (w[t] * h2) * (z * id - op.matrix).partialPivLu().solve(id);
        }
    }
    return acc / Complex(0.0, 2.0 * kPi);
}

void check_contour_distance(const std::vector<EigenPair>* eigs, double dist_tol,
                            const std::function<double(Complex)>& dist_to_contour) {
    if (!eigs) return;
    for (const auto& p : *eigs)
        if (dist_to_contour(p.value) < dist_tol) {
            std::ostringstream os;
            os << "eigenvalue " << p.value << " lies within " << dist_tol << " of the contour";
            throw ComputationError(os.str());
        }
}

}  // namespace

Eigen::MatrixXcd riesz_projection(const TruncatedOperator& op, Complex center, double radius,
                                  int quad_points, const Tolerances& tol,
                                  const std::vector<EigenPair>* eigs, QuadratureInfo* info) {
    check_contour_distance(eigs, tol.dist_tol_rel * radius, [&](Complex z) {
        return std::abs(std::abs(z - center) - radius);
    });
    int pts = std::max(8, quad_points);
    Eigen::MatrixXcd P;
    double defect = 0.0;
    for (;;) {
        P = resolvent_sum_circle(op, center, radius, pts);
        defect = (P * P - P).norm();
        if (defect <= tol.proj_tol || pts >= tol.quad_points_cap) break;
        pts *= 2;
    }
    if (defect > tol.proj_tol) {
        std::ostringstream os;
        os << "contour quadrature did not reach idempotency tolerance (defect " << defect
           << " at " << pts << " points, center " << center << ")";
        throw ComputationError(os.str());
    }
    if (info) {
        info->points = pts;
        info->idempotency_defect = defect;
    }
    return P;
}

Eigen::MatrixXcd riesz_projection_box(const TruncatedOperator& op, double half_side,
                                      int points_per_edge, const Tolerances& tol,
                                      const std::vector<EigenPair>* eigs, QuadratureInfo* info) {
    check_contour_distance(eigs, tol.dist_tol_rel, [&](Complex z) {
        const double dx = half_side - std::abs(z.real());
        const double dy = half_side - std::abs(z.imag());
        if (dx >= 0 && dy >= 0) return std::min(dx, dy);          // inside
        return std::hypot(std::max(0.0, -dx), std::max(0.0, -dy));  // outside
    });
    int pts = std::max(8, points_per_edge);
    Eigen::MatrixXcd S;
    double defect = 0.0;
    for (;;) {
        S = resolvent_sum_box(op, half_side, pts);
        defect = (S * S - S).norm();
        if (defect <= tol.proj_tol || pts >= tol.quad_points_cap) break;
        pts *= 2;
    }
    if (defect > tol.proj_tol) {
        std::ostringstream os;
        os << "box quadrature did not reach idempotency tolerance (defect " << defect << ")";
        throw ComputationError(os.str());
    }
    if (info) {
        info->points = pts;
        info->idempotency_defect = defect;
    }
    return S;
}

Eigen::MatrixXcd free_projection(const TruncatedOperator& op, int n) {
    Eigen::MatrixXcd P0 = Eigen::MatrixXcd::Zero(op.dim(), op.dim());
    for (int c : op.free_block_columns(n)) P0(c, c) = 1.0;
    return P0;
}

namespace {

// 2x2 complex Schur: C = U T U^H with T upper triangular, U unitary.
void schur2(const Eigen::Matrix2cd& C, Eigen::Matrix2cd& U, Eigen::Matrix2cd& T) {
    const Complex tr = C(0, 0) + C(1, 1);
    const Complex det = C(0, 0) * C(1, 1) - C(0, 1) * C(1, 0);
    const Complex disc = std::sqrt(tr * tr - 4.0 * det);
    Complex l1 = (tr + disc) / 2.0, l2 = (tr - disc) / 2.0;
    if (!complex_less(l1, l2)) std::swap(l1, l2);
    // eigenvector for l1
    Eigen::Vector2cd v;
    const Complex a = C(0, 0) - l1, b = C(0, 1), c = C(1, 0), d = C(1, 1) - l1;
    if (std::abs(a) + std::abs(b) >= std::abs(c) + std::abs(d)) {
        if (std::abs(b) > std::abs(a)) v << Complex(1.0), -a / b;
        else if (a != Complex(0.0)) v << -b / a, Complex(1.0);
        else v << Complex(1.0), Complex(0.0);
    } else {
        if (std::abs(d) > std::abs(c)) v << Complex(1.0), -c / d;
        else if (c != Complex(0.0)) v << -d / c, Complex(1.0);
        else v << Complex(0.0), Complex(1.0);
    }
    v.normalize();
    U.col(0) = v;
    U.col(1) << -std::conj(v(1)), std::conj(v(0));
    T = U.adjoint() * C * U;
    T(1, 0) = Complex(0.0);
}

}  // namespace

std::pair<Eigen::VectorXcd, double> option2_vectors(const SpectralBlock& block,
                                                    const TruncatedOperator& op) {
    if (block.block_class != BlockClass::M2)
        throw ComputationError("option2_vectors requires a Jordan (M2) block");
    const Complex s = block.u_plus.dot(op.matrix * block.u_minus);
    if (s == Complex(0.0))
        throw ComputationError("option2_vectors: vanishing Jordan coupling");
    Eigen::VectorXcd u_assoc = block.u_minus / s;
    return {u_assoc, std::abs(s)};
}

BlockAssembly assemble_blocks(const FourierPotential& pot, BoundaryCondition bc, int cutoff,
                              const Tolerances& tol, int threads) {
    if (bc == BoundaryCondition::Dirichlet)
        throw ComputationError("assemble_blocks expects Per+ or Per- (Dirichlet is solved internally)");

    BlockAssembly out;
    out.op = build_matrix(pot, bc, cutoff);
    out.eigs = eigensolve(out.op, tol);
    out.loc = localize(out.eigs, out.op);

    // validation run at doubled truncation (eigenvalues only)
    TruncatedOperator op2 = build_matrix(pot, bc, 2 * cutoff);
    std::vector<EigenPair> eigs2;
    {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(op2.matrix, false);
        if (solver.info() != Eigen::Success)
            throw ComputationError("eigensolve failed at the doubled cutoff");
        eigs2.resize(op2.dim());
        for (int i = 0; i < op2.dim(); ++i) eigs2[i].value = solver.eigenvalues()(i);
        std::sort(eigs2.begin(), eigs2.end(), [](const EigenPair& a, const EigenPair& b) {
            return complex_less(a.value, b.value);
        });
    }
    Localization loc2 = localize(eigs2, op2);

    // Dirichlet companion spectrum for the deviations
    TruncatedOperator dir_op = build_matrix(pot, BoundaryCondition::Dirichlet, cutoff);
    {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dir_op.matrix, false);
        if (solver.info() != Eigen::Success)
            throw ComputationError("Dirichlet eigensolve failed");
        out.dirichlet_eigs.resize(dir_op.dim());
        for (int i = 0; i < dir_op.dim(); ++i) out.dirichlet_eigs[i] = solver.eigenvalues()(i);
        std::sort(out.dirichlet_eigs.begin(), out.dirichlet_eigs.end(), complex_less);
    }

    out.projections.S_nstar =
        riesz_projection_box(out.op, out.loc.box_half_side, tol.quad_points, tol, &out.eigs);
    out.projections.dim_S =
        static_cast<int>(std::lround(out.projections.S_nstar.trace().real()));

    std::vector<int> ns;
    for (const auto& [n, idx] : out.loc.assignment) ns.push_back(n);
    out.blocks.resize(ns.size());
    std::mutex proj_mutex;

    parallel_for(static_cast<int>(ns.size()), threads, [&](int bi) {
        const int n = ns[bi];
        const auto& idx = out.loc.assignment.at(n);
        SpectralBlock blk;
        blk.n = n;
        const double lam0 = out.op.lambda0(n);
        blk.lambda_minus = out.eigs[idx.front()].value;
        blk.lambda_plus = out.eigs[idx.back()].value;
        blk.gamma = blk.lambda_plus - blk.lambda_minus;
        blk.z_star = (blk.lambda_minus + blk.lambda_plus) / 2.0 - lam0;
        blk.eig_residual = std::max(out.eigs[idx.front()].residual, out.eigs[idx.back()].residual);

        // Dirichlet pairing: nearest eigenvalue to lambda0
        double best = std::numeric_limits<double>::infinity();
        for (const auto& mu : out.dirichlet_eigs) {
            const double d = std::abs(mu - lam0);
            if (d < best) {
                best = d;
                blk.mu = mu;
            }
        }

        QuadratureInfo qi;
        // Any circle separating the pair from the rest of the spectrum yields the
        // same projection; fall back from the localization radius to the
        // best-cleared circle when an eigenvalue crowds the disc boundary.
        double radius = disc_radius(out.op, out.loc.n_star, n);
        {
            double inner = 0.0, outer = std::numeric_limits<double>::infinity();
            for (int i = 0; i < static_cast<int>(out.eigs.size()); ++i) {
                const double d = std::abs(out.eigs[i].value - Complex(lam0));
                if (i == idx.front() || i == idx.back()) inner = std::max(inner, d);
                else outer = std::min(outer, d);
            }
            if (std::min(radius - inner, outer - radius) < 0.05 * radius && outer > inner)
                radius = std::min((inner + outer) / 2.0, 4.0 * disc_radius(out.op, out.loc.n_star, n));
        }
        Eigen::MatrixXcd P =
            riesz_projection(out.op, Complex(lam0, 0.0), radius, tol.quad_points, tol, &out.eigs, &qi);
        Eigen::MatrixXcd P0 = free_projection(out.op, n);
        blk.idempotency_defect = qi.idempotency_defect;
        blk.deviation_norm = matrix_norm2(P - P0);
        blk.projection_norm = matrix_norm2(P);
        const int rank = static_cast<int>(std::lround(P.trace().real()));

        // orthonormal basis of Ran P via rank-revealing QR, then the 2x2 compression
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(P);
        Eigen::MatrixXcd Qfull = qr.householderQ();
        Eigen::MatrixXcd Q = Qfull.leftCols(2);
        Eigen::Matrix2cd C = Q.adjoint() * out.op.matrix * Q;

        const double jordan_tol = tol.jordan_rel * std::max(1.0, std::abs(lam0));
        Eigen::Matrix2cd U, T;
        schur2(C, U, T);
        blk.compression_offdiag = T(0, 1);
        if (std::abs(blk.gamma) > jordan_tol) {
            blk.block_class = BlockClass::M;
            Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(C, true);
            Eigen::Vector2cd ew = es.eigenvalues();
            int i_minus = std::abs(ew(0) - blk.lambda_minus) <= std::abs(ew(1) - blk.lambda_minus)
                              ? 0 : 1;
            blk.u_minus = Q * es.eigenvectors().col(i_minus).normalized();
            blk.u_plus = Q * es.eigenvectors().col(1 - i_minus).normalized();
        } else {
            blk.block_class = std::abs(T(0, 1)) > tol.m1m2_offdiag_tol ? BlockClass::M2
                                                                       : BlockClass::M1;
            // Option 1: u_plus the eigenvector, u_minus its orthogonal complement in E_n
            blk.u_plus = Q * U.col(0);
            blk.u_minus = Q * U.col(1);
        }
        blk.u_plus.normalize();
        blk.u_minus.normalize();

        // truncation gate: eigenvalue drift against the doubled cutoff.  The
        // lexicographic labels can swap between cutoffs when the pair is a
        // near-tie in the real part, so match by the better of the two pairings.
        auto it2 = loc2.assignment.find(n);
        if (it2 != loc2.assignment.end() && it2->second.size() == idx.size()) {
            const Complex lm2 = eigs2[it2->second.front()].value;
            const Complex lp2 = eigs2[it2->second.back()].value;
            const double straight =
                std::max(std::abs(blk.lambda_minus - lm2), std::abs(blk.lambda_plus - lp2));
            const double swapped =
                std::max(std::abs(blk.lambda_minus - lp2), std::abs(blk.lambda_plus - lm2));
            blk.drift = std::min(straight, swapped);
            const double gate = out.op.pot_kind == PotentialKind::HillSingular
                                    ? tol.trunc_rel_singular
                                    : tol.trunc_rel;
            blk.accepted = blk.drift < gate * std::max(1.0, std::abs(lam0));
        } else {
            blk.drift = std::numeric_limits<double>::infinity();
            blk.accepted = false;
        }

        out.blocks[bi] = std::move(blk);
        {
            std::scoped_lock lk(proj_mutex);
            out.projections.P[n] = std::move(P);
            out.projections.P0[n] = std::move(P0);
            out.projections.ranks[n] = rank;
            out.projections.deviation_norms[n] = out.blocks[bi].deviation_norm;
        }
    });

    for (const auto& b : out.blocks)
        if (!b.accepted) ++out.excluded_blocks;
    return out;
}

}  // namespace rieszspec
