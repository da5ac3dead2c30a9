#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "cnoidal/operators.hpp"
#include "cnoidal/stability.hpp"

using namespace cnoidal;

namespace {
const double kTwoPi = 2.0 * M_PI;

// rectangle-rule quadrature of f over [0,L) on N points
double quad(const std::function<double(double)>& f, double L, int N) {
    double s = 0.0;
    for (int j = 0; j < N; ++j) s += f(j * L / N);
    return s * L / N;
}
}  // namespace

TEST_CASE("phi prime L2 closed form vs quadrature") {
    for (double k : {0.88, 0.9, 0.95}) {
        const WaveParams p = kg_from_k(kTwoPi, Modulus(k));
        const double closed = phi_prime_l2(kTwoPi, Modulus(k));
        const double q = quad([&](double x) {
            const double d = profile_deriv(p, x);
            return d * d;
        }, p.L, 512);
        CHECK(closed > 0.0);
        CHECK(std::abs(closed - q) < 1e-8 * closed);
    }
    CHECK(phi_prime_l2(kTwoPi, Modulus(0.9)) ==
          doctest::Approx(7.2420816796891225).epsilon(1e-12));
    // amplitude blow-up toward the k -> 1/sqrt2 end
    CHECK(phi_prime_l2(kTwoPi, Modulus(0.7072)) > 1e3);
}

TEST_CASE("d''(c): analytic vs finite differences, negative throughout") {
    for (double k : {0.88, 0.9, 0.95}) {
        const double a = dpp_c(kTwoPi, Modulus(k));
        const double fd = dpp_c_fd(kTwoPi, Modulus(k));
        CHECK(a < 0.0);
        CHECK(std::abs(a - fd) < 1e-5 * std::abs(a));
    }
    CHECK(dpp_c(kTwoPi, Modulus(0.9)) ==
          doctest::Approx(-5.49693138).epsilon(1e-7));

    const double kmin = kg_k_min(kTwoPi);
    for (int i = 0; i < 30; ++i) {
        const double k = kmin + 1e-3 + (0.995 - kmin - 1e-3) * i / 29.0;
        CHECK(dpp_c(kTwoPi, Modulus(k)) < 0.0);
    }
    CHECK_THROWS_AS(dpp_c(kTwoPi, Modulus(0.75)), std::domain_error);
}

TEST_CASE("d''(omega): both routes positive and in agreement") {
    for (double k : {0.75, 0.8, 0.85, 0.9, 0.95}) {
        const double om = nls_from_k(kTwoPi, Modulus(k)).omega;
        const DppOmega d = dpp_omega(kTwoPi, om, 256);
        CHECK(d.finite_difference > 0.0);
        CHECK(d.chi_solve > 0.0);
        CHECK(std::abs(d.finite_difference - d.chi_solve) <
              1e-4 * std::abs(d.finite_difference));
    }
    const double om85 = nls_from_k(kTwoPi, Modulus(0.85)).omega;
    CHECK(dpp_omega(kTwoPi, om85, 256).finite_difference ==
          doctest::Approx(1.71713827).epsilon(1e-6));
}

TEST_CASE("opposite convexities on the shared modulus grid") {
    const double kmin = kg_k_min(kTwoPi);
    for (int i = 0; i < 10; ++i) {
        const double k = kmin + 1e-3 + (0.99 - kmin - 1e-3) * i / 9.0;
        CHECK(dpp_c(kTwoPi, Modulus(k)) < 0.0);
        const double om = nls_from_k(kTwoPi, Modulus(k)).omega;
        CHECK(dpp_omega(kTwoPi, om, 192).chi_solve > 0.0);
    }
}

TEST_CASE("potential well closed form") {
    // scaling identity between the wave at (L, k) and its omega = 1 relative
    for (double k : {0.85, 0.9, 0.95}) {
        const PotentialWellReport r = potential_well(kTwoPi, Modulus(k));
        CHECK(r.scaling_check < 1e-8);
        CHECK(r.d_level == r.P_value);
    }
    CHECK(potential_well(kTwoPi, Modulus(0.9)).P_value ==
          doctest::Approx(-0.8489430537182804).epsilon(1e-10));

    // zero exactly at the K = 2 modulus, positive below, negative above
    const Modulus k1 = find_k1();
    CHECK(k1.value() > 0.800);
    CHECK(k1.value() < 0.805);
    CHECK(std::abs(complete_elliptic(k1).bigK - 2.0) < 1e-10);
    CHECK(std::abs(potential_well(kTwoPi, k1).P_value) < 1e-9);
    CHECK(potential_well(kTwoPi, Modulus(0.75)).P_value > 0.0);
    CHECK(potential_well(kTwoPi, Modulus(0.85)).P_value < 0.0);
}

TEST_CASE("criticality reduces the action to its quartic term") {
    // Multiplying the profile equation by phi and integrating leaves
    // omega int phi'^2 + int phi^2 = int phi^4, so the action value
    // (1/2)int(omega phi'^2 + phi^2) - (1/4)int phi^4 equals (1/4)int phi^4.
    const WaveParams p = kg_from_k(kTwoPi, Modulus(0.9));
    const int N = 2048;
    const double quartic = quad([&](double x) {
        const double f = profile(p, x);
        return f * f * f * f;
    }, p.L, N);
    const double action = quad([&](double x) {
        const double f = profile(p, x);
        const double d = profile_deriv(p, x);
        return 0.5 * (p.omega * d * d + f * f) - 0.25 * f * f * f * f;
    }, p.L, N);
    CHECK(action == doctest::Approx(0.25 * quartic).epsilon(1e-10));
    CHECK(0.25 * quartic == doctest::Approx(3.0260048506688903).epsilon(1e-10));
}

TEST_CASE("verdicts") {
    // KG at L = 4: k1 admissible, speed window [0, 0.362)
    const StabilityVerdict unstable = verdict(Model::KG, 4.0, 0.25, 128);
    CHECK(unstable.outcome == Outcome::OrbitallyUnstable);
    CHECK(unstable.constrained_n == 1);
    CHECK(unstable.constrained_z == 1);
    CHECK(unstable.dpp < 0.0);
    REQUIRE(unstable.bounds.c_k1.has_value());
    CHECK(*unstable.bounds.c_k1 == doctest::Approx(0.3620453613388689).epsilon(1e-8));

    // KG at L = 2pi: the K = 2 modulus is inadmissible, the regime is empty
    const StabilityVerdict empty = verdict(Model::KG, kTwoPi, 0.1, 128);
    CHECK(empty.outcome == Outcome::Inconclusive);
    CHECK(!empty.bounds.c_k1.has_value());
    CHECK(empty.dpp < 0.0);

    // KG at L = 4 beyond the window: d'' < 0 but no global-existence regime
    const StabilityVerdict beyond = verdict(Model::KG, 4.0, 0.5, 128);
    CHECK(beyond.outcome == Outcome::Inconclusive);

    // NLS below omega*
    const StabilityVerdict stable = verdict(Model::NLS, kTwoPi, 0.8, 128);
    CHECK(stable.outcome == Outcome::OrbitallyStable);
    CHECK(stable.constrained_n == 1);
    CHECK(stable.constrained_z == 2);
    CHECK(stable.dpp > 0.0);

    // NLS above omega*
    const StabilityVerdict above = verdict(Model::NLS, kTwoPi, 2.0, 128);
    CHECK(above.outcome == Outcome::Inconclusive);
    CHECK(above.constrained_n == 2);
}

TEST_CASE("regime bounds expose the derived critical speeds") {
    const RegimeBounds b2pi = regime_bounds(kTwoPi);
    REQUIRE(b2pi.cstar.has_value());
    CHECK(*b2pi.cstar == doctest::Approx(0.5456963568907705).epsilon(1e-8));
    CHECK(b2pi.omegastar == doctest::Approx(1.4240642934091752).epsilon(1e-8));
    CHECK(!b2pi.c_k1.has_value());
}

TEST_CASE("stable and unstable sets follow the critical moduli") {
    const RegimeBounds b = regime_bounds(4.0);
    REQUIRE(b.c_k1.has_value());
    // inside the window
    for (double c : {0.05, 0.2, 0.35}) {
        CHECK(verdict(Model::KG, 4.0, c, 128).outcome ==
              Outcome::OrbitallyUnstable);
    }
    // outside
    for (double c : {0.37, 0.6, 0.9}) {
        CHECK(verdict(Model::KG, 4.0, c, 128).outcome != Outcome::OrbitallyUnstable);
    }
    const double omegastar = regime_bounds(kTwoPi).omegastar;
    for (double f : {0.3, 0.7, 0.95}) {
        CHECK(verdict(Model::NLS, kTwoPi, f * omegastar, 128).outcome ==
              Outcome::OrbitallyStable);
    }
    for (double f : {1.05, 1.5}) {
        CHECK(verdict(Model::NLS, kTwoPi, f * omegastar, 128).outcome ==
              Outcome::Inconclusive);
    }
}
