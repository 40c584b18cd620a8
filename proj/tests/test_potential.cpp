#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rieszspec/potential.hpp"

using namespace rieszspec;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("from_trig_coeffs basics") {
    SUBCASE("empty table is the zero potential") {
        auto pot = FourierPotential::from_trig_coeffs({});
        CHECK(pot.support_bound() == 0);
        CHECK(pot.v(2) == Complex(0.0));
        CHECK(pot.v(-100) == Complex(0.0));
    }
    SUBCASE("duplicate keys merge by last write with a warning") {
        auto pot = FourierPotential::from_trig_coeffs(
            {{-4, 5.0}, {2, 2.0}, {2, -3.0}, {4, 4.0}});
        CHECK(pot.v(-4) == Complex(5.0));
        CHECK(pot.v(2) == Complex(-3.0));
        CHECK(pot.v(4) == Complex(4.0));
        CHECK(pot.warnings().size() == 1);
        CHECK(pot.support_bound() == 4);
    }
    SUBCASE("Mathieu-type table") {
        auto pot = FourierPotential::from_trig_coeffs({{2, 1.0}, {-2, 1.0}});
        CHECK(pot.v(2) == Complex(1.0));
        CHECK(pot.v(-2) == Complex(1.0));
        CHECK(pot.support_bound() == 2);
    }
    SUBCASE("odd index rejected naming the index") {
        CHECK_THROWS_WITH_AS(FourierPotential::from_trig_coeffs({{3, 1.0}}),
                             doctest::Contains("3"), PotentialError);
    }
}

TEST_CASE("from_w applies V(m) = i m W(m)") {
    auto pot = FourierPotential::from_w({{2, 1.0}});
    CHECK(pot.v(2) == Complex(0.0, 2.0));
    CHECK(pot.is_singular());
    CHECK(pot.has_w());

    auto zero = FourierPotential::from_w({{0, 7.0}});
    CHECK(zero.v(0) == Complex(0.0));

    auto neg = FourierPotential::from_w({{-2, Complex(0.0, 1.0)}});
    CHECK(neg.v(-2).real() == Approx(2.0));
    CHECK(neg.v(-2).imag() == Approx(0.0));

    SUBCASE("rebuilding from the stored W reproduces V exactly") {
        auto pot2 = FourierPotential::from_w({{2, Complex(0.3, -0.7)}, {-4, Complex(1.1, 0.2)}});
        FourierPotential::CoeffList w;
        for (const auto& [m, c] : pot2.w_table()) w.emplace_back(m, c);
        auto rebuilt = FourierPotential::from_w(w);
        for (const auto& [m, c] : pot2.v_table()) CHECK(rebuilt.v(m) == c);
    }
}

TEST_CASE("gasymov family") {
    SUBCASE("constant c = 1") {
        std::vector<Complex> c{1.0};
        auto pot = FourierPotential::gasymov(c, 10);
        for (int m = 2; m <= 20; m += 2) CHECK(pot.v(m) == Complex(1.0));
        for (int m = 0; m >= -20; m -= 2) CHECK(pot.v(m) == Complex(0.0));
        CHECK(pot.v(22) == Complex(0.0));
        CHECK(pot.support_bound() == 20);
        CHECK(pot.bound_A() == 1.0);
    }
    SUBCASE("alternating signs") {
        std::vector<Complex> c{-1.0, 1.0, -1.0};
        auto pot = FourierPotential::gasymov(c, 3);
        CHECK(pot.v(2) == Complex(-1.0));
        CHECK(pot.v(4) == Complex(1.0));
        CHECK(pot.v(6) == Complex(-1.0));
    }
    SUBCASE("zero coefficient rejected naming k") {
        std::vector<Complex> c{0.0};
        CHECK_THROWS_WITH_AS(FourierPotential::gasymov(c, 3), doctest::Contains("c(1)"),
                             PotentialError);
    }
    SUBCASE("one-sided support drives beta- downstream") {
        std::vector<Complex> c{Complex(0.5, 0.5)};
        auto pot = FourierPotential::gasymov(c, 6);
        for (int m = 0; m >= -12; m -= 2) CHECK(pot.v(m) == Complex(0.0));
    }
}

TEST_CASE("delta comb family") {
    SUBCASE("single point alpha = pi/2, g = 1") {
        auto pot = FourierPotential::delta_comb({kPi / 2}, {Complex(1.0)}, 2);
        CHECK(pot.v(2).real() == Approx(-1.0 / kPi));
        CHECK(pot.v(-2).real() == Approx(-1.0 / kPi));
        CHECK(pot.v(4).real() == Approx(1.0 / kPi));
        CHECK(pot.v(-4).real() == Approx(1.0 / kPi));
        CHECK(pot.v(0) == Complex(0.0));
        CHECK(pot.dominance_flag());
        // |V(k)| = 1/pi on the whole window
        for (int k = -4; k <= 4; k += 2) {
            if (k == 0) continue;
            CHECK(std::abs(pot.v(k)) == Approx(1.0 / kPi).epsilon(1e-15));
        }
    }
    SUBCASE("two-sided bound with the derived A under dominance") {
        auto pot = FourierPotential::delta_comb({0.7, 2.1}, {Complex(2.0), Complex(0.5)}, 16);
        CHECK(pot.dominance_flag());
        REQUIRE(pot.bound_A().has_value());
        const double A = *pot.bound_A();
        for (int k = -32; k <= 32; k += 2) {
            if (k == 0) continue;
            const double mag = std::abs(pot.v(k));
            CHECK(mag <= A * (1 + 1e-12));
            CHECK(mag >= 1.0 / A * (1 - 1e-12));
        }
    }
    SUBCASE("dominance flag false when no weight dominates") {
        auto pot = FourierPotential::delta_comb({0.5, 1.0, 2.0},
                                                {Complex(1.0), Complex(1.0), Complex(1.0)}, 4);
        CHECK(!pot.dominance_flag());
        // the upper bound |V(k)| <= (1/pi) sum |g| holds regardless
        for (int k = -8; k <= 8; k += 2) {
            if (k == 0) continue;
            CHECK(std::abs(pot.v(k)) <= 3.0 / kPi + 1e-14);
        }
    }
    SUBCASE("dominance example |g(a*)| = 2 > 1") {
        auto pot =
            FourierPotential::delta_comb({0.9, 1.9}, {Complex(1.0), Complex(2.0)}, 4);
        CHECK(pot.dominance_flag());
    }
    SUBCASE("point outside (0,pi) rejected") {
        CHECK_THROWS_AS(FourierPotential::delta_comb({-0.1}, {Complex(1.0)}, 4), PotentialError);
        CHECK_THROWS_AS(FourierPotential::delta_comb({kPi}, {Complex(1.0)}, 4), PotentialError);
    }
    SUBCASE("reads outside the declared window are hard errors") {
        auto pot = FourierPotential::delta_comb({kPi / 2}, {Complex(1.0)}, 4);
        CHECK(pot.window_bound() == 8);
        CHECK_NOTHROW(pot.v(8));
        CHECK_THROWS_WITH_AS(pot.v(10), doctest::Contains("window"), PotentialError);
        CHECK_THROWS_AS(pot.ensure_window(10), PotentialError);
        CHECK_NOTHROW(pot.ensure_window(8));
    }
}

TEST_CASE("tail_energy") {
    auto p1 = FourierPotential::from_w({{2, 1.0}});
    CHECK(p1.tail_energy(4) == Approx(0.0));
    auto p2 = FourierPotential::from_w({{2, 3.0}, {4, 4.0}});
    CHECK(p2.tail_energy(4) == Approx(4.0));
    CHECK(p2.tail_energy(2) == Approx(5.0));
    CHECK(p2.tail_energy(3) == Approx(4.0));
    // monotone non-increasing in N
    double prev = p2.tail_energy(0);
    for (int n = 1; n <= 6; ++n) {
        CHECK(p2.tail_energy(n) <= prev + 1e-15);
        prev = p2.tail_energy(n);
    }
    auto reg = FourierPotential::from_trig_coeffs({{2, 1.0}});
    CHECK_THROWS_WITH_AS(reg.tail_energy(2), doctest::Contains("provenance"), PotentialError);
}

TEST_CASE("dirac potential stores P and Q independently") {
    auto pot = FourierPotential::dirac({{2, Complex(0.4, 0.1)}}, {{-2, Complex(0.3)}});
    CHECK(pot.kind() == PotentialKind::Dirac);
    CHECK(pot.p(2) == Complex(0.4, 0.1));
    CHECK(pot.q(-2) == Complex(0.3));
    CHECK(pot.p(-2) == Complex(0.0));
    CHECK(pot.q(2) == Complex(0.0));
    CHECK_THROWS_AS(pot.v(2), PotentialError);
    CHECK_THROWS_AS(FourierPotential::dirac({{1, Complex(1.0)}}, {}), PotentialError);
}
