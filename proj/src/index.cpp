#include "cnoidal/index.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cnoidal/numerics.hpp"

namespace cnoidal {

namespace {

// z0 tie tolerance: |D| <= 1e-8 L declares a zero of the constraint quantity.
double tie_tol(double L) { return 1e-8 * L; }

struct Deflated {
    Eigen::VectorXd kernel;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

Deflated deflate(const Eigen::MatrixXd& M) {
    const EigenDecomposition ed = eigen_decompose(M);
    int i0 = 0;
    for (int i = 1; i < ed.values.size(); ++i) {
        if (std::abs(ed.values[i]) < std::abs(ed.values[i0])) i0 = i;
    }
    Deflated d;
    d.kernel = ed.vectors.col(i0);
    d.lu = Eigen::PartialPivLU<Eigen::MatrixXd>(
        M + d.kernel * d.kernel.transpose());
    return d;
}

Eigen::VectorXd deflated_solve(const Deflated& d, const Eigen::VectorXd& rhs) {
    const Eigen::VectorXd reduced = rhs - d.kernel * d.kernel.dot(rhs);
    Eigen::VectorXd u = d.lu.solve(reduced);
    u -= d.kernel * d.kernel.dot(u);
    return u;
}

DWhich which_of(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::KgL1: return DWhich::D1;
        case OperatorKind::NlsL2: return DWhich::D2;
        case OperatorKind::NlsL3: return DWhich::D3;
        default:
            throw std::domain_error("no scalar D-quantity for block operators");
    }
}

// RK4 on a small fixed-size state with analytically evaluated coefficients.
template <int Dim, typename Rhs>
void rk4_march(Rhs rhs, double h, int steps, double (&y)[Dim],
               const std::function<void(int, const double*)>& record) {
    double k1[Dim], k2[Dim], k3[Dim], k4[Dim], tmp[Dim];
    record(0, y);
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        rhs(t, y, k1);
        for (int d = 0; d < Dim; ++d) tmp[d] = y[d] + 0.5 * h * k1[d];
        rhs(t + 0.5 * h, tmp, k2);
        for (int d = 0; d < Dim; ++d) tmp[d] = y[d] + 0.5 * h * k2[d];
        rhs(t + 0.5 * h, tmp, k3);
        for (int d = 0; d < Dim; ++d) tmp[d] = y[d] + h * k3[d];
        rhs(t + h, tmp, k4);
        for (int d = 0; d < Dim; ++d) {
            y[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        }
        record(i + 1, y);
    }
}

}  // namespace

DQuantity d1_closed_form(double L, Modulus k) {
    const double kv = k.value();
    if (kv <= 1.0 / std::sqrt(2.0)) {
        throw std::domain_error("D1 requires k > 1/sqrt(2)");
    }
    const auto [bigK, bigE] = complete_elliptic(k);
    const double value = -L * (2.0 * kv * kv - 1.0) / bigK * (2.0 * bigE - bigK);
    return {DWhich::D1, value, DMethod::ClosedForm};
}

DQuantity d_linear_solve(OperatorKind kind, const WaveParams& params, int N) {
    const DWhich which = which_of(kind);
    const OperatorMatrix M = build(kind, params, N);
    const Deflated d = deflate(M.entries);

    Eigen::VectorXd ones = Eigen::VectorXd::Ones(N);
    const double overlap = std::abs(d.kernel.dot(ones)) / ones.norm();
    if (overlap > 1e-8) {
        throw std::runtime_error(
            "deflated solve: right-hand side overlaps the detected kernel "
            "(overlap = " + std::to_string(overlap) + ")");
    }
    const Eigen::VectorXd u = deflated_solve(d, ones);
    const double value = u.sum() * params.L / N;
    return {which, value, DMethod::LinearSolve};
}

std::pair<DQuantity, GreenSolve> d3_via_ivp(const WaveParams& params, int steps) {
    if (params.model != Model::NLS) {
        throw std::domain_error("d3_via_ivp expects an NLS wave");
    }
    if (steps < 10000) {
        throw std::domain_error("d3_via_ivp needs at least 1e4 steps");
    }
    const double L = params.L;
    const double om = params.omega;
    const double h = L / steps;

    GreenSolve gs;
    gs.xs.resize(steps + 1);
    gs.p.resize(steps + 1);

    auto rhs = [&](double t, const double* y, double* dy) {
        const double phi = profile(params, t);
        dy[0] = y[1];
        dy[1] = om * y[0] - phi * phi * y[0] - 1.0;  // -p'' + om p - phi^2 p = 1
        dy[2] = y[0];
    };
    double state[3] = {0.0, 0.0, 0.0};
    double dpL = 0.0;
    rk4_march<3>(rhs, h, steps, state, [&](int i, const double* y) {
        gs.xs[i] = i * h;
        gs.p[i] = y[0];
        if (i == steps) dpL = y[1];
    });

    gs.p_period_defect = std::abs(gs.p[steps] - gs.p[0]);
    gs.dp_period_defect = std::abs(dpL - 0.0);
    gs.periodic_ok = gs.p_period_defect <= 1e-6 && gs.dp_period_defect <= 1e-6;

    // Composite Simpson for (p,1); steps is even whenever it is a power of 10,
    // otherwise fall back on the trapezoid rule.
    double integral = 0.0;
    if (steps % 2 == 0) {
        for (int i = 0; i + 2 <= steps; i += 2) {
            integral += h / 3.0 * (gs.p[i] + 4.0 * gs.p[i + 1] + gs.p[i + 2]);
        }
    } else {
        for (int i = 0; i < steps; ++i) {
            integral += 0.5 * h * (gs.p[i] + gs.p[i + 1]);
        }
    }
    return {DQuantity{DWhich::D3, integral, DMethod::IVP}, std::move(gs)};
}

GreenSolve auxiliary_y(const WaveParams& params, int steps) {
    if (params.model != Model::NLS) {
        throw std::domain_error("auxiliary_y expects an NLS wave");
    }
    if (steps < 10000) {
        throw std::domain_error("auxiliary_y needs at least 1e4 steps");
    }
    const double L = params.L;
    const double om = params.omega;
    const double h = L / steps;
    const double phi0 = profile(params, 0.0);  // = amplitude, never zero

    // y over [0, 2L] so that y(x+L) is available on the same grid;
    // extra states accumulate int y and int phi.
    const int total = 2 * steps;
    std::vector<double> yv(total + 1), inty(total + 1), intphi(total + 1);
    auto rhs = [&](double t, const double* y, double* dy) {
        const double phi = profile(params, t);
        dy[0] = y[1];
        dy[1] = om * y[0] - phi * phi * y[0];
        dy[2] = y[0];
        dy[3] = phi;
    };
    double state[4] = {0.0, 1.0 / phi0, 0.0, 0.0};
    std::vector<double> dyv(total + 1);
    rk4_march<4>(rhs, h, total, state, [&](int i, const double* y) {
        yv[i] = y[0];
        dyv[i] = y[1];
        inty[i] = y[2];
        intphi[i] = y[3];
    });

    GreenSolve gs;
    gs.xs.resize(steps + 1);
    std::vector<double> phis(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        gs.xs[i] = i * h;
        phis[i] = profile(params, gs.xs[i]);
    }

    // theta from y(x+L) - y(x) = theta phi(x), least squares over the grid.
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= steps; ++i) {
        num += (yv[i + steps] - yv[i]) * phis[i];
        den += phis[i] * phis[i];
    }
    const double theta = num / den;
    gs.theta = theta;
    gs.integral_y = inty[steps];

    // y(-x) = y(L-x) - theta phi(L-x) by the Floquet relation and periodicity.
    double odd = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const int j = steps - i;
        odd = std::max(odd, std::abs(yv[j] - theta * phis[j] + yv[i]));
    }
    gs.oddness_defect = odd;

    double wdef = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double w = phis[i] * dyv[i] - profile_deriv(params, gs.xs[i]) * yv[i];
        wdef = std::max(wdef, std::abs(w - 1.0));
    }
    gs.wronskian_defect = wdef;
    if (wdef > 1e-6) gs.periodic_ok = false;

    // Variation of parameters. The combination (int y) phi - (int phi) y has
    // Wronskian-normalized data and solves the +1 right-hand side.
    gs.p.resize(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        gs.p[i] = inty[i] * phis[i] - intphi[i] * yv[i];
    }
    gs.p_period_defect = std::abs(gs.p[steps] - gs.p[0]);
    gs.dp_period_defect = std::abs(inty[steps] * profile_deriv(params, L) -
                                   intphi[steps] * dyv[steps]);
    if (gs.p_period_defect > 1e-6 || gs.dp_period_defect > 1e-6) {
        gs.periodic_ok = false;
    }

    const auto [d3, direct] = d3_via_ivp(params, steps);
    double rec = 0.0;
    for (int i = 0; i <= steps; ++i) {
        rec = std::max(rec, std::abs(gs.p[i] - direct.p[i]));
    }
    gs.reconstruction_defect = rec;
    return gs;
}

IndexReport index_report(OperatorKind kind, const WaveParams& params, int N) {
    const OperatorMatrix M = build(kind, params, N);
    const SpectrumReport unconstrained = spectrum(M);

    double d_value = 0.0;
    if (kind == OperatorKind::KgBlock) {
        // det(D) = D1 * L with D = diag(D1, L); the (0,1) direction always
        // contributes a positive eigenvalue, so the counts of D reduce to the
        // sign of D1.
        d_value = kg_block_dmatrix(params, N)(0, 0);
    } else if (kind == OperatorKind::NlsBlock) {
        throw std::domain_error(
            "index_report handles the NLS block per component (L2, L3)");
    } else {
        d_value = d_linear_solve(kind, params, N).value;
    }

    IndexReport r;
    r.kind = kind;
    r.unconstrained_n = unconstrained.n_neg;
    r.unconstrained_z = unconstrained.z_dim;
    r.d_value = d_value;
    const double tol = tie_tol(params.L);
    r.z0 = std::abs(d_value) <= tol ? 1 : 0;
    r.n0 = (r.z0 == 0 && d_value < 0.0) ? 1 : 0;
    r.constrained_n = r.unconstrained_n - r.n0 - r.z0;
    r.constrained_z = r.unconstrained_z + r.z0;

    const SpectrumReport projected = constrained_spectrum(M);
    if (projected.n_neg != r.constrained_n || projected.z_dim != r.constrained_z) {
        throw std::runtime_error(
            std::string("index formula contradicts explicit projection for ") +
            kind_name(kind) + ": formula (" + std::to_string(r.constrained_n) +
            "," + std::to_string(r.constrained_z) + ") vs projected (" +
            std::to_string(projected.n_neg) + "," +
            std::to_string(projected.z_dim) + ")");
    }
    return r;
}

Eigen::Matrix2d kg_block_dmatrix(const WaveParams& params, int N) {
    const OperatorMatrix M = build(OperatorKind::KgBlock, params, N);
    const Deflated d = deflate(M.entries);
    const double h = params.L / N;

    Eigen::VectorXd s1 = Eigen::VectorXd::Zero(2 * N);
    Eigen::VectorXd s2 = Eigen::VectorXd::Zero(2 * N);
    s1.head(N).setOnes();
    s2.tail(N).setOnes();

    const Eigen::VectorXd u1 = deflated_solve(d, s1);
    const Eigen::VectorXd u2 = deflated_solve(d, s2);

    Eigen::Matrix2d out;
    out(0, 0) = u1.dot(s1) * h;
    out(0, 1) = u1.dot(s2) * h;
    out(1, 0) = u2.dot(s1) * h;
    out(1, 1) = u2.dot(s2) * h;
    return out;
}

Modulus find_kstar() {
    const double k = bisect(
        [](double kk) {
            const auto [bigK, bigE] = complete_elliptic(Modulus(kk));
            return 2.0 * bigE - bigK;
        },
        0.85, 0.95, 1e-12);
    return Modulus(k);
}

}  // namespace cnoidal
