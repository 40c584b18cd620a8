#include "rieszspec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace rieszspec {

std::string to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::HillRegular: return "hill_regular";
        case PotentialKind::HillSingular: return "hill_singular";
        case PotentialKind::Dirac: return "dirac";
    }
    return "?";
}

namespace {

void require_even(int key, const char* what) {
    if (key % 2 != 0) {
        std::ostringstream os;
        os << what << ": index " << key << " is odd; coefficients live on the even lattice";
        throw PotentialError(os.str());
    }
}

int support_of(const std::map<int, Complex>& t) {
    int b = 0;
    for (const auto& [m, c] : t)
        if (c != Complex(0.0)) b = std::max(b, std::abs(m));
    return b;
}

}  // namespace

Complex FourierPotential::v(int m) const {
    if (kind_ == PotentialKind::Dirac)
        throw PotentialError("v(m) requested from a Dirac potential");
    if (window_bound_ && std::abs(m) > *window_bound_) {
        std::ostringstream os;
        os << "coefficient V(" << m << ") lies outside the declared window |m| <= "
           << *window_bound_ << " of family '" << family_ << "'";
        throw PotentialError(os.str());
    }
    auto it = v_.find(m);
    return it == v_.end() ? Complex(0.0) : it->second;
}

Complex FourierPotential::p(int k) const {
    if (kind_ != PotentialKind::Dirac)
        throw PotentialError("p(k) requested from a Hill potential");
    auto it = p_.find(k);
    return it == p_.end() ? Complex(0.0) : it->second;
}

Complex FourierPotential::q(int k) const {
    if (kind_ != PotentialKind::Dirac)
        throw PotentialError("q(k) requested from a Hill potential");
    auto it = q_.find(k);
    return it == q_.end() ? Complex(0.0) : it->second;
}

Complex FourierPotential::w(int m) const {
    if (!has_w()) throw PotentialError("no singular provenance: W table absent");
    auto it = w_.find(m);
    return it == w_.end() ? Complex(0.0) : it->second;
}

void FourierPotential::ensure_window(int max_index) const {
    if (window_bound_ && max_index > *window_bound_) {
        std::ostringstream os;
        os << "requested coefficient window |m| <= " << max_index
           << " exceeds the declared window |m| <= " << *window_bound_
           << " of family '" << family_ << "' (first missing index " << *window_bound_ + 1
           << ")";
        throw PotentialError(os.str());
    }
}

double FourierPotential::tail_energy(int n_from) const {
    if (!has_w()) throw PotentialError("no singular provenance: tail_energy needs W");
    double s = 0.0;
    for (const auto& [m, c] : w_)
        if (std::abs(m) >= n_from) s += std::norm(c);
    return std::sqrt(s);
}

FourierPotential FourierPotential::from_trig_coeffs(const CoeffList& coeffs, PotentialKind kind) {
    if (kind == PotentialKind::Dirac)
        throw PotentialError("use FourierPotential::dirac for Dirac potentials");
    FourierPotential pot;
    pot.kind_ = kind;
    for (const auto& [m, c] : coeffs) {
        require_even(m, "from_trig_coeffs");
        auto [it, inserted] = pot.v_.insert_or_assign(m, c);
        (void)it;
        if (!inserted) {
            std::ostringstream os;
            os << "duplicate coefficient at index " << m << ": keeping the last value";
            pot.warnings_.push_back(os.str());
        }
    }
    pot.support_bound_ = support_of(pot.v_);
    return pot;
}

FourierPotential FourierPotential::from_w(const CoeffList& w_coeffs) {
    FourierPotential pot;
    pot.kind_ = PotentialKind::HillSingular;
    pot.family_ = "w_table";
    for (const auto& [m, c] : w_coeffs) {
        require_even(m, "from_w");
        pot.w_.insert_or_assign(m, c);
    }
    for (const auto& [m, c] : w_coeffs)
        pot.v_[m] = Complex(0.0, 1.0) * static_cast<double>(m) * c;   // V(m) = i m W(m)
    pot.v_[0] = Complex(0.0);
    pot.support_bound_ = support_of(pot.v_);
    return pot;
}

FourierPotential FourierPotential::gasymov(const std::vector<Complex>& c, int harmonic_cutoff) {
    if (harmonic_cutoff < 1) throw PotentialError("gasymov: cutoff K must be >= 1");
    if (c.empty()) throw PotentialError("gasymov: empty coefficient sequence");
    FourierPotential pot;
    pot.kind_ = PotentialKind::HillSingular;
    pot.family_ = "gasymov";
    double a_max = 0.0, a_min = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= harmonic_cutoff; ++k) {
        Complex ck = c[std::min<std::size_t>(k - 1, c.size() - 1)];
        if (ck == Complex(0.0)) {
            std::ostringstream os;
            os << "gasymov: |c(" << k << ")| = 0 violates the two-sided bound 1/A <= |c(k)| <= A";
            throw PotentialError(os.str());
        }
        pot.v_[2 * k] = ck;
        pot.w_[2 * k] = ck / (Complex(0.0, 1.0) * static_cast<double>(2 * k));
        a_max = std::max(a_max, std::abs(ck));
        a_min = std::min(a_min, std::abs(ck));
    }
    pot.support_bound_ = 2 * harmonic_cutoff;
    pot.bound_A_ = std::max(a_max, 1.0 / a_min);
    return pot;
}

FourierPotential FourierPotential::delta_comb(const std::vector<double>& points,
                                              const std::vector<Complex>& weights,
                                              int harmonic_cutoff) {
    if (points.size() != weights.size())
        throw PotentialError("delta_comb: points and weights differ in length");
    if (points.empty()) throw PotentialError("delta_comb: no points");
    if (harmonic_cutoff < 1) throw PotentialError("delta_comb: cutoff K must be >= 1");
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i] > 0.0 && points[i] < pi)) {
            std::ostringstream os;
            os << "delta_comb: point alpha = " << points[i] << " outside the open interval (0, pi)";
            throw PotentialError(os.str());
        }
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw PotentialError("delta_comb: points must be distinct");
    }

    FourierPotential pot;
    pot.kind_ = PotentialKind::HillSingular;
    pot.family_ = "delta_comb";
    for (int k = -2 * harmonic_cutoff; k <= 2 * harmonic_cutoff; k += 2) {
        if (k == 0) continue;   // mean-zero normalization
        Complex vk(0.0);
        for (std::size_t i = 0; i < points.size(); ++i)
            vk += weights[i] * std::polar(1.0, k * points[i]);
        vk /= pi;
        pot.v_[k] = vk;
        pot.w_[k] = vk / (Complex(0.0, 1.0) * static_cast<double>(k));
    }
    pot.v_[0] = Complex(0.0);
    pot.support_bound_ = support_of(pot.v_);
    pot.window_bound_ = 2 * harmonic_cutoff;

    // Dominance condition: one weight beats the sum of the rest.  When it holds,
    // |V(k)| is pinched in [1/A, A] on the window; record the derived A.
    double total = 0.0, best = 0.0;
    for (const auto& g : weights) total += std::abs(g);
    for (const auto& g : weights) best = std::max(best, std::abs(g));
    pot.dominance_ = best > total - best;
    if (pot.dominance_) {
        double lower = (best - (total - best)) / pi;
        double upper = total / pi;
        pot.bound_A_ = std::max(upper, 1.0 / lower);
    }
    return pot;
}

FourierPotential FourierPotential::dirac(const CoeffList& p_coeffs, const CoeffList& q_coeffs) {
    FourierPotential pot;
    pot.kind_ = PotentialKind::Dirac;
    pot.family_ = "dirac_table";
    for (const auto& [k, c] : p_coeffs) {
        require_even(k, "dirac P");
        pot.p_.insert_or_assign(k, c);
    }
    for (const auto& [k, c] : q_coeffs) {
        require_even(k, "dirac Q");
        pot.q_.insert_or_assign(k, c);
    }
    pot.support_bound_ = std::max(support_of(pot.p_), support_of(pot.q_));
    return pot;
}

}  // namespace rieszspec
