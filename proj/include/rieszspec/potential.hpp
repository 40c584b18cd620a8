#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rieszspec/types.hpp"

namespace rieszspec {

/// A Hill or Dirac potential held as a finitely supported table of Fourier
/// coefficients on the even lattice.  Hill potentials store V(m); singular ones
/// additionally carry the antiderivative table W(m) with V(m) = i m W(m).
/// Dirac potentials store the off-diagonal entries P(k), Q(k) independently.
///
/// Objects are immutable after construction and safe to share across threads.
class FourierPotential {
public:
    using CoeffList = std::vector<std::pair<int, Complex>>;

    static FourierPotential from_trig_coeffs(const CoeffList& coeffs,
                                             PotentialKind kind = PotentialKind::HillRegular);
    static FourierPotential from_w(const CoeffList& w_coeffs);
    /// Gasymov one-sided potential: V(m) = c(m/2) for 0 < m <= 2K, zero elsewhere.
    /// c holds c(1..K); entries beyond K are ignored, missing ones repeat the last.
    static FourierPotential gasymov(const std::vector<Complex>& c, int harmonic_cutoff);
    /// Periodized delta comb with weights g at points alpha in (0,pi), materialized
    /// for even |k| <= 2K.  Coefficients outside that window are not representable
    /// (the family does not decay) and reading them is a hard error.
    static FourierPotential delta_comb(const std::vector<double>& points,
                                       const std::vector<Complex>& weights,
                                       int harmonic_cutoff);
    static FourierPotential dirac(const CoeffList& p_coeffs, const CoeffList& q_coeffs);

    PotentialKind kind() const { return kind_; }
    bool is_hill() const { return kind_ != PotentialKind::Dirac; }
    bool is_singular() const { return kind_ == PotentialKind::HillSingular; }

    /// Hill coefficient V(m).  Zero outside the support; throws outside the
    /// declared window of a truncated family.
    Complex v(int m) const;
    Complex p(int k) const;
    Complex q(int k) const;

    bool has_w() const { return !w_.empty(); }
    Complex w(int m) const;

    /// l2 tail of W over |m| >= n_from (Hill singular provenance only).
    double tail_energy(int n_from) const;

    int support_bound() const { return support_bound_; }
    /// Largest |index| whose coefficient is representable; nullopt = unlimited.
    std::optional<int> window_bound() const { return window_bound_; }
    /// Throws when some |index| <= max_index falls outside the declared window.
    void ensure_window(int max_index) const;

    const std::map<int, Complex>& v_table() const { return v_; }
    const std::map<int, Complex>& w_table() const { return w_; }
    const std::map<int, Complex>& p_table() const { return p_; }
    const std::map<int, Complex>& q_table() const { return q_; }

    const std::string& family() const { return family_; }
    /// Two-sided coefficient bound A with 1/A <= |V(k)| <= A on the window, when the
    /// family provides one (gasymov, dominant delta comb).
    std::optional<double> bound_A() const { return bound_A_; }
    bool dominance_flag() const { return dominance_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    FourierPotential() = default;

    PotentialKind kind_ = PotentialKind::HillRegular;
    std::map<int, Complex> v_, w_, p_, q_;
    int support_bound_ = 0;
    std::optional<int> window_bound_;
    std::string family_ = "table";
    std::optional<double> bound_A_;
    bool dominance_ = false;
    std::vector<std::string> warnings_;
};

}  // namespace rieszspec
