#pragma once

#include <vector>

#include "rieszspec/discretize.hpp"
#include "rieszspec/potential.hpp"
#include "rieszspec/types.hpp"

namespace rieszspec {

struct BetaEval {
    int n = 0;
    Complex z;
    Complex beta_minus, beta_plus;
    double t = 1.0;           // three-branch ratio at zero_tol
    int order_used = 0;       // series order K actually summed
    int band_used = 0;        // index window J
    std::vector<double> term_norms_minus, term_norms_plus;   // |S_k| per order
    bool converged = false;
};

/// Direct summation of the Lyapunov-Schmidt series
///   beta^pm_n(v;z) = V(+-2n) + sum_k S^pm_k,
/// with chain indices restricted to the parity lattice, |j| <= band, j != +-n.
/// Each order is a banded vector-matrix product over chain endpoints; the value
/// is validated against a doubled band before the converged flag is set.
BetaEval beta_pm(const FourierPotential& pot, int n, Complex z, int order, int band,
                 const Tolerances& tol = Tolerances());

/// Three-branch ratio of Eq-style t_n: |b-/b+|, +inf, or 1 when both vanish.
double t_ratio(Complex beta_minus, Complex beta_plus, double zero_tol);

/// max(0, |gamma_n| - 2(|b-| + |b+|)) evaluated at z = z*_n.
double gap_bound_check(const SpectralBlock& block, const BetaEval& eval);

struct LeadingTermDeviation {
    double scaled_minus = 0.0;   // |beta- - V(-2n)| * n / log n
    double scaled_plus = 0.0;
};

LeadingTermDeviation leading_term_check(const FourierPotential& pot, int n, Complex z,
                                        int order, int band,
                                        const Tolerances& tol = Tolerances());

}  // namespace rieszspec
