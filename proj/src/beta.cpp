#include "rieszspec/beta.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rieszspec {

namespace {

struct SeriesResult {
    Complex value;
    std::vector<double> term_norms;
};

// One-signed series at a fixed band.  sign=+1 computes beta+, -1 beta-.
// Chains run from -sign*n to sign*n; psi accumulates partial chains from the
// far endpoint, one resolvent-weighted hop per order.
SeriesResult sum_series(const FourierPotential& pot, int n, Complex z, int order, int band,
                        int sign, double series_tol) {
    std::vector<int> lat;
    for (int j = -band; j <= band; ++j)
        if ((j - n) % 2 == 0 && j != n && j != -n) lat.push_back(j);
    const int L = static_cast<int>(lat.size());
    const double nn = static_cast<double>(n) * n;

    std::vector<Complex> den(L), psi(L);
    for (int i = 0; i < L; ++i) {
        den[i] = nn - static_cast<double>(lat[i]) * lat[i] + z;
        psi[i] = pot.v(lat[i] + sign * n) / den[i];
    }

    SeriesResult res;
    res.value = pot.v(2 * sign * n);
    std::vector<Complex> next(L);
    int negligible_run = 0;   // parity can zero out single orders; stop on two in a row
    for (int k = 1; k <= order; ++k) {
        Complex Sk(0.0);
        for (int i = 0; i < L; ++i) Sk += pot.v(sign * n - lat[i]) * psi[i];
        res.value += Sk;
        res.term_norms.push_back(std::abs(Sk));
        const bool tiny =
            res.value != Complex(0.0) && std::abs(Sk) < series_tol * std::abs(res.value);
        negligible_run = tiny ? negligible_run + 1 : 0;
        if (negligible_run >= 2) break;
        if (k == order) break;
        for (int i = 0; i < L; ++i) {
            Complex acc(0.0);
            for (int i2 = 0; i2 < L; ++i2) {
                const Complex dv = pot.v(lat[i] - lat[i2]);
                if (dv != Complex(0.0)) acc += dv * psi[i2];
            }
            next[i] = acc / den[i];
        }
        psi.swap(next);
    }
    return res;
}

}  // namespace

BetaEval beta_pm(const FourierPotential& pot, int n, Complex z, int order, int band,
                 const Tolerances& tol) {
    if (!pot.is_hill())
        throw ComputationError("beta_pm: series is defined for Hill potentials only");
    if (n < 1) throw ComputationError("beta_pm: index n must be positive");
    if (std::abs(z) >= n / 4.0) {
        std::ostringstream os;
        os << "beta_pm: |z| = " << std::abs(z) << " outside the domain |z| < n/4 = " << n / 4.0;
        throw ComputationError(os.str());
    }
    if (order < 1) throw ComputationError("beta_pm: order must be >= 1");
    BetaEval out;
    out.n = n;
    out.z = z;
    out.order_used = order;
    out.band_used = band;

    SeriesResult minus = sum_series(pot, n, z, order, band, -1, tol.series_tol);
    SeriesResult plus = sum_series(pot, n, z, order, band, +1, tol.series_tol);
    out.beta_minus = minus.value;
    out.beta_plus = plus.value;
    out.term_norms_minus = std::move(minus.term_norms);
    out.term_norms_plus = std::move(plus.term_norms);
    out.t = t_ratio(out.beta_minus, out.beta_plus, tol.zero_tol);

    // convergence: the last two recorded orders negligible against the value
    // (single orders vanish by parity), and the doubled band moves the value by
    // no more than series_tol relatively
    auto order_ok = [&](const std::vector<double>& terms, Complex value) {
        if (terms.empty()) return true;
        double tail = terms.back();
        if (terms.size() >= 2) tail = std::max(tail, terms[terms.size() - 2]);
        return tail <= tol.series_tol * std::max(std::abs(value), 1e-300) * 10.0;
    };
    bool converged = order_ok(out.term_norms_minus, out.beta_minus) &&
                     order_ok(out.term_norms_plus, out.beta_plus);
    if (converged) {
        SeriesResult minus2 = sum_series(pot, n, z, order, 2 * band, -1, tol.series_tol);
        SeriesResult plus2 = sum_series(pot, n, z, order, 2 * band, +1, tol.series_tol);
        const double scale = std::max({std::abs(out.beta_minus), std::abs(out.beta_plus), 1e-300});
        converged = std::abs(minus2.value - out.beta_minus) <= tol.series_tol * scale &&
                    std::abs(plus2.value - out.beta_plus) <= tol.series_tol * scale;
    }
    out.converged = converged;
    return out;
}

double t_ratio(Complex beta_minus, Complex beta_plus, double zero_tol) {
    const double bm = std::abs(beta_minus), bp = std::abs(beta_plus);
    if (bp > zero_tol) return bm / bp;
    if (bm > zero_tol) return std::numeric_limits<double>::infinity();
    return 1.0;
}

double gap_bound_check(const SpectralBlock& block, const BetaEval& eval) {
    if (std::abs(eval.z - block.z_star) >
        1e-9 * std::max(1.0, std::abs(block.z_star)) + 1e-12)
        throw ComputationError("gap_bound_check: evaluation point differs from z*_n");
    return std::max(0.0, std::abs(block.gamma) -
                             2.0 * (std::abs(eval.beta_minus) + std::abs(eval.beta_plus)));
}

LeadingTermDeviation leading_term_check(const FourierPotential& pot, int n, Complex z,
                                        int order, int band, const Tolerances& tol) {
    BetaEval ev = beta_pm(pot, n, z, order, band, tol);
    const double scale = n / std::log(static_cast<double>(n));
    LeadingTermDeviation dev;
    dev.scaled_minus = std::abs(ev.beta_minus - pot.v(-2 * n)) * scale;
    dev.scaled_plus = std::abs(ev.beta_plus - pot.v(2 * n)) * scale;
    return dev;
}

}  // namespace rieszspec
