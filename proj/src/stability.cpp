#include "cnoidal/stability.hpp"

#include <cmath>
#include <stdexcept>

#include "cnoidal/numerics.hpp"

namespace cnoidal {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::OrbitallyUnstable: return "OrbitallyUnstable";
        case Outcome::OrbitallyStable: return "OrbitallyStable";
        case Outcome::Inconclusive: return "Inconclusive";
    }
    return "?";
}

double phi_prime_l2(double L, Modulus k) {
    const double kv = k.value();
    const auto [bigK, bigE] = complete_elliptic(k);
    const double den = 2.0 * kv * kv - 1.0;
    return 32.0 * bigK / (3.0 * den * L) * (den * bigE + (1.0 - kv * kv) * bigK);
}

double dpp_c(double L, Modulus k) {
    const double kv = k.value();
    const WaveParams w = kg_from_k(L, k);  // enforces the admissible branch
    const auto [bigK, bigE] = complete_elliptic(k);
    const double dK = d_bigK_dk(k);
    const double dE = d_bigE_dk(k);
    const double den = 2.0 * kv * kv - 1.0;

    const double m = -phi_prime_l2(L, k);

    // g(k) = K E + K^2 (1-k^2)/(2k^2-1); int (phi')^2 = 32 g / (3L).
    const double g_deriv = dK * bigE + bigK * dE +
                           2.0 * bigK * dK * (1.0 - kv * kv) / den +
                           bigK * bigK * (-2.0 * kv) / (den * den);

    // omega = L^2 / (16 K^2 (2k^2-1))
    const double domega = -(L * L / 16.0) *
                          (2.0 * dK / (bigK * bigK * bigK * den) +
                           4.0 * kv / (bigK * bigK * den * den));

    const double n = 64.0 * (1.0 - w.omega) / (3.0 * L) * g_deriv / domega;
    return m + n;
}

double dpp_c_fd(double L, Modulus k, double rel_step) {
    const WaveParams w = kg_from_k(L, k);
    const double c = w.speed();
    const double h = rel_step * std::max(std::abs(c), 0.1);
    auto d_prime = [L](double cv) {
        const Modulus kk = kg_k_from_c(L, cv);
        return -cv * phi_prime_l2(L, kk);
    };
    return (d_prime(c + h) - d_prime(c - h)) / (2.0 * h);
}

namespace {

// d'(omega) = F(phi_omega) = (1/2) int phi^2, closed form.
double mass_closed_form(double L, double omega) {
    const Modulus k = nls_k_from_omega(L, omega);
    const double kv = k.value();
    const auto [bigK, bigE] = complete_elliptic(k);
    return omega * L * (bigE - (1.0 - kv * kv) * bigK) /
           ((2.0 * kv * kv - 1.0) * bigK);
}

}  // namespace

DppOmega dpp_omega(double L, double omega, int N) {
    if (!(omega > 0.0)) {
        throw std::domain_error("dpp_omega needs omega > 0");
    }
    const double h = 1e-4 * omega;
    const double fd = (mass_closed_form(L, omega + h) -
                       mass_closed_form(L, omega - h)) / (2.0 * h);

    const Modulus k = nls_k_from_omega(L, omega);
    const WaveParams w = nls_from_k(L, k);
    const OperatorMatrix M = build(OperatorKind::NlsL2, w, N);
    const EigenDecomposition ed = eigen_decompose(M.entries);
    int i0 = 0;
    for (int i = 1; i < ed.values.size(); ++i) {
        if (std::abs(ed.values[i]) < std::abs(ed.values[i0])) i0 = i;
    }
    Eigen::VectorXd phi(N);
    for (int j = 0; j < N; ++j) phi[j] = profile(w, j * L / N);
    const Eigen::VectorXd q = ed.vectors.col(i0);
    Eigen::VectorXd rhs = phi - q * q.dot(phi);
    Eigen::VectorXd chi =
        Eigen::PartialPivLU<Eigen::MatrixXd>(M.entries + q * q.transpose())
            .solve(rhs);
    chi -= q * q.dot(chi);
    const double chi_val = -(chi.dot(phi)) * L / N;

    const double rel = std::abs(fd - chi_val) /
                       std::max({std::abs(fd), std::abs(chi_val), 1e-300});
    if (rel > 1e-4) {
        throw std::runtime_error(
            "dpp_omega: finite-difference and chi-solve routes disagree beyond "
            "1e-4 relative (" + std::to_string(fd) + " vs " +
            std::to_string(chi_val) + ")");
    }
    return {fd, chi_val};
}

PotentialWellReport potential_well(double L, Modulus k) {
    const double kv = k.value();
    auto closed = [kv](double period) {
        const auto [bigK, bigE] = complete_elliptic(Modulus(kv));
        const double den = 2.0 * kv * kv - 1.0;
        const double t = (kv * kv * kv * kv - 5.0 / 3.0 * kv * kv + 2.0 / 3.0) * bigK +
                         bigE * (4.0 / 3.0 * kv * kv - 2.0 / 3.0);
        return -period * (bigK - 2.0) * t / (bigK * (den * den));
    };
    const double value = closed(L);
    const double omega = kg_hill_from_k(L, k).omega;
    // The omega = 1 member of the same modulus family lives at period L1.
    const double L1 = L / std::sqrt(omega);
    const double scaled = std::sqrt(omega) * closed(L1);
    const double denom = std::max(std::abs(value), 1e-300);
    return {value, value, std::abs(value - scaled) / denom};
}

Modulus find_k1() {
    const double k = bisect(
        [](double kk) { return complete_elliptic(Modulus(kk)).bigK - 2.0; },
        0.75, 0.85, 1e-12);
    return Modulus(k);
}

RegimeBounds regime_bounds(double L) {
    RegimeBounds b;
    b.kstar = find_kstar().value();
    b.k1 = find_k1().value();
    b.omegastar = nls_from_k(L, Modulus(b.kstar)).omega;
    const double kmin = kg_k_min(L);
    if (b.kstar >= kmin) {
        b.cstar = kg_from_k(L, Modulus(b.kstar)).speed();
    }
    if (b.k1 >= kmin) {
        b.c_k1 = kg_from_k(L, Modulus(b.k1)).speed();
    }
    return b;
}

StabilityVerdict verdict(Model model, double L, double parameter, int N) {
    StabilityVerdict v;
    v.model = model;
    v.L = L;
    v.parameter = parameter;
    v.bounds = regime_bounds(L);

    if (model == Model::KG) {
        const double c = parameter;
        const Modulus k = kg_k_from_c(L, c);
        v.k = k.value();
        const WaveParams w = kg_from_k(L, k);
        const IndexReport block = index_report(OperatorKind::KgBlock, w, N);
        v.constrained_n = block.constrained_n;
        v.constrained_z = block.constrained_z;
        v.dpp = dpp_c(L, k);

        if (!v.bounds.c_k1) {
            v.outcome = Outcome::Inconclusive;
            v.reason = "instability criterion regime empty at this period: the "
                       "K=2 modulus is below the admissible range, so no speed "
                       "interval [0, c(k1)) exists";
        } else if (c >= *v.bounds.c_k1) {
            v.outcome = Outcome::Inconclusive;
            v.reason = "d'' < 0 but the speed exceeds c(k1); global existence "
                       "below the potential-well level is not established there";
        } else if (v.constrained_n == 1 && v.constrained_z == 1 && v.dpp < 0.0) {
            v.outcome = Outcome::OrbitallyUnstable;
            v.reason = "constrained operator has one simple negative direction, "
                       "simple kernel, and d''(c) < 0 on [0, c(k1))";
        } else {
            v.outcome = Outcome::Inconclusive;
            v.reason = "spectral or convexity hypotheses not met";
        }
        return v;
    }

    const double omega = parameter;
    const Modulus k = nls_k_from_omega(L, omega);
    v.k = k.value();
    const WaveParams w = nls_from_k(L, k);
    const IndexReport r2 = index_report(OperatorKind::NlsL2, w, N);
    const IndexReport r3 = index_report(OperatorKind::NlsL3, w, N);
    v.constrained_n = r2.constrained_n + r3.constrained_n;
    v.constrained_z = r2.constrained_z + r3.constrained_z;
    v.dpp = dpp_omega(L, omega, N).chi_solve;

    if (omega >= v.bounds.omegastar) {
        v.outcome = Outcome::Inconclusive;
        v.reason = "omega above omega*: the constrained operator gains a second "
                   "negative direction and the stability criterion does not apply";
    } else if (r2.constrained_n == 1 && r3.constrained_n == 0 && v.dpp > 0.0) {
        v.outcome = Outcome::OrbitallyStable;
        v.reason = "single constrained negative direction, d''(omega) > 0, and "
                   "omega in (0, omega*)";
    } else {
        v.outcome = Outcome::Inconclusive;
        v.reason = "spectral or convexity hypotheses not met";
    }
    return v;
}

}  // namespace cnoidal
