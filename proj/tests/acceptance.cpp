// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in code, next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cnoidal/evolution.hpp"
#include "cnoidal/index.hpp"
#include "cnoidal/operators.hpp"
#include "cnoidal/stability.hpp"
#include "cnoidal/waves.hpp"

using namespace cnoidal;

namespace {

const double kTwoPi = 2.0 * M_PI;
int g_failures = 0;

class Criterion {
  public:
    explicit Criterion(std::string label) : label_(std::move(label)) {}

    void require(bool ok, const std::string& what) {
        if (!ok) {
            problems_.push_back(what);
        }
    }

    void finish() {
        if (problems_.empty()) {
            std::printf("PASS  %s\n", label_.c_str());
        } else {
            ++g_failures;
            std::printf("FAIL  %s\n", label_.c_str());
            for (const auto& p : problems_) {
                std::printf("      - %s\n", p.c_str());
            }
        }
        std::fflush(stdout);
    }

  private:
    std::string label_;
    std::vector<std::string> problems_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// 1. critical moduli
void criterion_1() {
    Criterion c("1  critical moduli kstar in [0.906,0.911], k1 in [0.800,0.805], "
                "residuals < 1e-10, runtime < 1 s");
    const auto t0 = std::chrono::steady_clock::now();
    const Modulus kstar = find_kstar();
    const Modulus k1 = find_k1();
    const double elapsed = seconds_since(t0);
    c.require(kstar.value() >= 0.906 && kstar.value() <= 0.911,
              "kstar = " + fmt(kstar.value()));
    c.require(k1.value() >= 0.800 && k1.value() <= 0.805,
              "k1 = " + fmt(k1.value()));
    const auto pk = complete_elliptic(kstar);
    c.require(std::abs(2.0 * pk.bigE - pk.bigK) < 1e-10,
              "2E-K residual = " + fmt(2.0 * pk.bigE - pk.bigK));
    c.require(std::abs(complete_elliptic(k1).bigK - 2.0) < 1e-10,
              "K-2 residual");
    c.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
    c.finish();
}

// 2. D1 dual computation
void criterion_2() {
    Criterion c("2  D1 closed form vs deflated solve, 1e-6 relative at N=512, "
                "sign pattern around kstar");
    const double kstar = find_kstar().value();
    for (double k : {0.75, 0.85, 0.88, 0.93, 0.97}) {
        const double closed = d1_closed_form(kTwoPi, Modulus(k)).value;
        const WaveParams hill = kg_hill_from_k(kTwoPi, Modulus(k));
        const double solved =
            d_linear_solve(OperatorKind::KgL1, hill, 512).value;
        c.require(std::abs(solved - closed) <= 1e-6 * std::abs(closed),
                  "k=" + fmt(k) + ": closed " + fmt(closed) + " vs solve " +
                      fmt(solved));
        if (k < kstar) c.require(closed < 0.0, "sign below kstar at k=" + fmt(k));
        if (k > kstar) c.require(closed > 0.0, "sign above kstar at k=" + fmt(k));
    }
    c.require(std::abs(d1_closed_form(kTwoPi, find_kstar()).value) < 1e-9,
              "zero at kstar");
    c.finish();
}

// 3. unconstrained spectral counts
void criterion_3() {
    Criterion c("3  spectral counts at N=256: L1 (2,1), L2 (2,1), L3 (1,1), "
                "KG block (2,1), five moduli each side of kstar");
    const double below[] = {0.88, 0.885, 0.89, 0.9, 0.905};
    const double above[] = {0.915, 0.92, 0.93, 0.95, 0.97};
    auto check_counts = [&](double k) {
        const WaveParams kg = kg_from_k(kTwoPi, Modulus(k));
        const WaveParams nls = nls_from_k(kTwoPi, Modulus(k));
        const SpectrumReport l1 = spectrum(build(OperatorKind::KgL1, kg, 256));
        const SpectrumReport l2 = spectrum(build(OperatorKind::NlsL2, nls, 256));
        const SpectrumReport l3 = spectrum(build(OperatorKind::NlsL3, nls, 256));
        const SpectrumReport bk = spectrum(build(OperatorKind::KgBlock, kg, 256));
        c.require(l1.n_neg == 2 && l1.z_dim == 1,
                  "L1 counts at k=" + fmt(k) + ": (" + fmt(l1.n_neg) + "," +
                      fmt(l1.z_dim) + ")");
        c.require(l2.n_neg == 2 && l2.z_dim == 1, "L2 counts at k=" + fmt(k));
        c.require(l3.n_neg == 1 && l3.z_dim == 1, "L3 counts at k=" + fmt(k));
        c.require(bk.n_neg == 2 && bk.z_dim == 1, "block counts at k=" + fmt(k));
    };
    for (double k : below) check_counts(k);
    for (double k : above) check_counts(k);
    c.finish();
}

// 4. index bookkeeping consistency
void criterion_4() {
    Criterion c("4  index formula equals explicit projection; constrained "
                "outcomes (1,1)/(2,1)/(1,2), block likewise, L2 likewise, "
                "L3 (0,1)");
    const double kstar = find_kstar().value();
    try {
        struct Want {
            OperatorKind kind;
            double k;
            int n, z;
        };
        const Want wants[] = {
            {OperatorKind::KgL1, 0.89, 1, 1},
            {OperatorKind::KgL1, kstar, 1, 2},
            {OperatorKind::KgL1, 0.94, 2, 1},
            {OperatorKind::KgBlock, 0.89, 1, 1},
            {OperatorKind::KgBlock, kstar, 1, 2},
            {OperatorKind::KgBlock, 0.94, 2, 1},
            {OperatorKind::NlsL2, 0.8, 1, 1},
            {OperatorKind::NlsL2, kstar, 1, 2},
            {OperatorKind::NlsL2, 0.94, 2, 1},
            {OperatorKind::NlsL3, 0.75, 0, 1},
            {OperatorKind::NlsL3, 0.9, 0, 1},
            {OperatorKind::NlsL3, 0.97, 0, 1},
        };
        for (const auto& want : wants) {
            const bool kg_kind = want.kind == OperatorKind::KgL1 ||
                                 want.kind == OperatorKind::KgBlock;
            const WaveParams p = kg_kind ? kg_from_k(kTwoPi, Modulus(want.k))
                                         : nls_from_k(kTwoPi, Modulus(want.k));
            // index_report itself hard-fails on any formula/projection mismatch
            const IndexReport r = index_report(want.kind, p, 256);
            c.require(r.constrained_n == want.n && r.constrained_z == want.z,
                      std::string(kind_name(want.kind)) + " at k=" + fmt(want.k) +
                          ": got (" + fmt(r.constrained_n) + "," +
                          fmt(r.constrained_z) + "), want (" + fmt(want.n) + "," +
                          fmt(want.z) + ")");
        }
    } catch (const std::exception& e) {
        c.require(false, std::string("hard failure: ") + e.what());
    }
    c.finish();
}

// 5. D3 negativity and dual computation
void criterion_5() {
    Criterion c("5  D3 < 0 on a 20-point sweep; IVP vs solve 1e-6 relative; "
                "p-periodicity < 1e-8; Wronskian < 1e-6");
    const double lo = 1.0 / std::sqrt(2.0) + 0.01;
    for (int i = 0; i < 20; ++i) {
        const double k = lo + (0.99 - lo) * i / 19.0;
        const auto [d3, gs] = d3_via_ivp(nls_from_k(kTwoPi, Modulus(k)), 20000);
        c.require(d3.value < 0.0, "D3 sign at k=" + fmt(k));
        c.require(gs.p_period_defect < 1e-8 && gs.dp_period_defect < 1e-8,
                  "p periodicity at k=" + fmt(k) + ": " +
                      fmt(gs.p_period_defect) + ", " + fmt(gs.dp_period_defect));
    }
    for (int i = 0; i < 10; ++i) {
        const double k = lo + 0.01 + (0.98 - lo - 0.01) * i / 9.0;
        const WaveParams p = nls_from_k(kTwoPi, Modulus(k));
        const double ivp = d3_via_ivp(p, 100000).first.value;
        const double sol = d_linear_solve(OperatorKind::NlsL3, p, 512).value;
        c.require(std::abs(ivp - sol) <= 1e-6 * std::abs(sol),
                  "IVP vs solve at k=" + fmt(k) + ": " + fmt(ivp) + " vs " +
                      fmt(sol));
    }
    for (double k : {0.8, 0.9, 0.95}) {
        const GreenSolve gs = auxiliary_y(nls_from_k(kTwoPi, Modulus(k)), 50000);
        c.require(*gs.wronskian_defect < 1e-6,
                  "Wronskian defect at k=" + fmt(k) + ": " +
                      fmt(*gs.wronskian_defect));
    }
    c.finish();
}

// 6. signs of d''(c) and d''(omega)
void criterion_6() {
    Criterion c("6  d''(c) < 0 on a 30-point admissible sweep (FD agreement "
                "1e-5); d''(omega) > 0 by chi-solve and FD (agreement 1e-4)");
    const double kmin = kg_k_min(kTwoPi);
    for (int i = 0; i < 30; ++i) {
        const double k = kmin + 1e-3 + (0.995 - kmin - 1e-3) * i / 29.0;
        c.require(dpp_c(kTwoPi, Modulus(k)) < 0.0, "d''(c) sign at k=" + fmt(k));
    }
    for (double k : {0.88, 0.9, 0.93, 0.96, 0.99}) {
        const double a = dpp_c(kTwoPi, Modulus(k));
        const double fd = dpp_c_fd(kTwoPi, Modulus(k));
        c.require(std::abs(a - fd) <= 1e-5 * std::abs(a),
                  "d''(c) FD agreement at k=" + fmt(k) + ": " + fmt(a) + " vs " +
                      fmt(fd));
    }
    for (double k : {0.75, 0.8, 0.85, 0.9, 0.95}) {
        const double om = nls_from_k(kTwoPi, Modulus(k)).omega;
        try {
            const DppOmega d = dpp_omega(kTwoPi, om, 256);  // throws beyond 1e-4
            c.require(d.finite_difference > 0.0 && d.chi_solve > 0.0,
                      "d''(omega) sign at k=" + fmt(k));
        } catch (const std::exception& e) {
            c.require(false, e.what());
        }
    }
    c.finish();
}

// 7. potential-well identity
void criterion_7() {
    Criterion c("7  action scaling identity within 1e-8 on a k-grid; zero "
                "crossing exactly at K(k)=2");
    for (int i = 0; i < 15; ++i) {
        const double k = 0.72 + (0.98 - 0.72) * i / 14.0;
        const PotentialWellReport r = potential_well(kTwoPi, Modulus(k));
        c.require(r.scaling_check < 1e-8,
                  "scaling defect at k=" + fmt(k) + ": " + fmt(r.scaling_check));
    }
    const Modulus k1 = find_k1();
    c.require(std::abs(complete_elliptic(k1).bigK - 2.0) < 1e-10, "K(k1) = 2");
    c.require(std::abs(potential_well(kTwoPi, k1).P_value) < 1e-9,
              "P value at k1");
    c.require(potential_well(kTwoPi, Modulus(k1.value() - 0.02)).P_value > 0.0,
              "P > 0 below k1");
    c.require(potential_well(kTwoPi, Modulus(k1.value() + 0.02)).P_value < 0.0,
              "P < 0 above k1");
    c.finish();
}

// 8. analytic eigenpairs
void criterion_8() {
    Criterion c("8  Lame eigenpair residuals < 1e-6 at N=512; discrete "
                "eigenvalues match the closed forms to 1e-6");
    const WaveParams kg = kg_from_k(kTwoPi, Modulus(0.9));
    const OperatorMatrix M = build(OperatorKind::KgL1, kg, 512);
    const auto pairs = lame_eigenpairs(Modulus(0.9), kg);
    for (int idx : {0, 4}) {
        std::vector<double> v(512);
        for (int j = 0; j < 512; ++j) {
            v[j] = pairs[idx].sampler(j * kg.L / 512.0);
        }
        const double r = eigen_residual(M, pairs[idx].value, v);
        c.require(r < 1e-6, "residual of pair " + fmt(idx) + ": " + fmt(r));
    }
    const SpectrumReport sp = spectrum(M);
    c.require(std::abs(sp.eigenvalues[0] - pairs[0].value) <=
                  1e-6 * std::abs(pairs[0].value),
              "lambda0 match: " + fmt(sp.eigenvalues[0]) + " vs " +
                  fmt(pairs[0].value));
    c.require(std::abs(sp.eigenvalues[4] - pairs[4].value) <=
                  1e-6 * std::abs(pairs[4].value),
              "lambda4 match: " + fmt(sp.eigenvalues[4]) + " vs " +
                  fmt(pairs[4].value));
    c.finish();
}

// 9. evolution oracles
void criterion_9() {
    Criterion c("9  NLS standing wave sup error < 1e-6 at T=10 (N=256, "
                "dt=1e-3); KG traveling wave orbital distance < 1e-4 at T=5 "
                "(N=256, dt=1e-4); drifts in tolerance; each run < 60 s");
    {
        const auto t0 = std::chrono::steady_clock::now();
        const double L = 4.0 * M_PI;
        const WaveParams p = nls_from_k(L, Modulus(0.75));
        FieldState st = make_wave_state(p, 256);
        NlsStepper stepper(256, L);
        const ConservedPair c0 = conserved(st);
        bool finite = true;
        for (int i = 0; i < 10000; ++i) finite = finite && stepper.step(st, 1e-3);
        c.require(finite, "NLS run stayed finite");
        const std::complex<double> unwind =
            std::exp(std::complex<double>(0.0, -p.omega * 10.0));
        double sup = 0.0;
        for (int j = 0; j < 256; ++j) {
            sup = std::max(sup,
                           std::abs(st.psi[j] * unwind - profile(p, j * L / 256)));
        }
        c.require(sup < 1e-6, "standing-wave sup error " + fmt(sup));
        const ConservedPair c1 = conserved(st);
        const double mass_drift =
            std::abs(c1.momentum_or_mass - c0.momentum_or_mass) /
            c0.momentum_or_mass;
        c.require(mass_drift < 1e-11, "mass drift " + fmt(mass_drift));
        c.require(std::abs(c1.energy - c0.energy) / std::abs(c0.energy) < 1e-8,
                  "energy drift");
        c.require(seconds_since(t0) < 60.0, "NLS runtime");
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const WaveParams p = kg_from_k(kTwoPi, Modulus(0.9));
        FieldState st = make_wave_state(p, 256);
        KgStepper stepper(256, kTwoPi);
        const ConservedPair c0 = conserved(st);
        bool finite = true;
        for (int i = 0; i < 50000; ++i) finite = finite && stepper.step(st, 1e-4);
        c.require(finite, "KG run stayed finite");
        const double dist = orbital_distance(st, p);
        c.require(dist < 1e-4, "traveling-wave orbital distance " + fmt(dist));
        const ConservedPair c1 = conserved(st);
        c.require(std::abs(c1.energy - c0.energy) / std::abs(c0.energy) < 1e-8,
                  "energy drift");
        c.require(std::abs(c1.momentum_or_mass - c0.momentum_or_mass) /
                          std::abs(c0.momentum_or_mass) <
                      1e-8,
                  "momentum drift");
        c.require(seconds_since(t0) < 60.0, "KG runtime");
    }
    c.finish();
}

// 10. dynamical dichotomy
void criterion_10() {
    Criterion c("10 dichotomy: NLS (k<kstar) keeps distance < 1e-2 to T=50 for "
                "3 seeds; KG in [0, c(k1)) grows 10x or blows up for >= 2 of 3 "
                "seeds");
    for (std::uint64_t seed : {1, 2, 3}) {
        ExperimentConfig cfg;
        cfg.model = Model::NLS;
        cfg.L = kTwoPi;
        cfg.k = 0.85;  // below kstar = 0.9089
        cfg.perturbation = Perturbation::ZeroMeanRandom;
        cfg.eps = 1e-3;
        cfg.T = 50.0;
        cfg.dt = 1e-3;
        cfg.N = 256;
        cfg.seed = seed;
        cfg.sample_dt = 0.5;
        const ExperimentResult r = run_experiment(cfg);
        c.require(!r.blew_up, "NLS seed " + fmt(seed) + " stayed finite");
        c.require(r.max_distance < 1e-2, "NLS seed " + fmt(seed) +
                                             " max distance " +
                                             fmt(r.max_distance));
    }
    int unstable_seeds = 0;
    for (std::uint64_t seed : {1, 2, 3}) {
        ExperimentConfig cfg;
        cfg.model = Model::KG;
        cfg.L = 4.0;
        cfg.k = 0.796746;  // speed 0.25, inside [0, c(k1) = 0.362)
        cfg.perturbation = Perturbation::ZeroMeanRandom;
        cfg.eps = 1e-3;
        cfg.T = 50.0;
        cfg.dt = 1e-4;
        cfg.N = 256;
        cfg.seed = seed;
        cfg.sample_dt = 0.25;
        const ExperimentResult r = run_experiment(cfg);
        const bool grew = r.max_distance >= 10.0 * r.initial_distance;
        if (grew || r.blew_up) ++unstable_seeds;
    }
    c.require(unstable_seeds >= 2, "unstable seeds: " + fmt(unstable_seeds));
    c.finish();
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
