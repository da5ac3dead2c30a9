#include "cnoidal/waves.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cnoidal/numerics.hpp"
#include "cnoidal/spectral.hpp"

namespace cnoidal {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_cnoidal_modulus(double k) {
    if (k <= kInvSqrt2) {
        throw std::domain_error("cnoidal modulus must satisfy k > 1/sqrt(2), got " +
                                std::to_string(k));
    }
}

void require_period(double L) {
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw std::domain_error("period L must be positive and finite");
    }
}

WaveParams kg_params(double L, Modulus k, bool require_speed) {
    require_period(L);
    const double kv = k.value();
    require_cnoidal_modulus(kv);
    const double bigK = complete_elliptic(k).bigK;
    const double admissible_L = 4.0 * bigK * std::sqrt(2.0 * kv * kv - 1.0);
    const double omega = (L * L) / (16.0 * bigK * bigK * (2.0 * kv * kv - 1.0));
    if (require_speed && L > admissible_L * (1.0 + 1e-13)) {
        throw std::domain_error(
            "inadmissible KG wave: omega = " + std::to_string(omega) +
            " violates omega < 1; need L <= 4 K(k) sqrt(2k^2-1) = " +
            std::to_string(admissible_L) + ", got L = " + std::to_string(L));
    }
    WaveParams p;
    p.model = Model::KG;
    p.L = L;
    p.k = kv;
    p.omega = omega;
    if (omega <= 1.0 + 1e-13) {
        p.c = std::sqrt(std::max(0.0, 1.0 - omega));
    }
    p.amplitude = std::sqrt(2.0) * kv / std::sqrt(2.0 * kv * kv - 1.0);
    p.scale = 4.0 * bigK / L;
    return p;
}

}  // namespace

double WaveParams::speed() const {
    if (!c) {
        throw std::domain_error("wave has no traveling speed (NLS wave or omega > 1)");
    }
    return *c;
}

double kg_k_min(double L) {
    require_period(L);
    const double lo = kInvSqrt2 + 1e-9;
    const double hi = 0.9999994;  // just inside the k^2 <= 1 - 1e-12 guard
    auto f = [L](double k) {
        return 4.0 * complete_elliptic(Modulus(k)).bigK * std::sqrt(2.0 * k * k - 1.0) - L;
    };
    if (f(hi) <= 0.0) {
        throw std::domain_error("period L too large for the supported modulus range");
    }
    return bisect(f, lo, hi, 1e-14);
}

WaveParams kg_from_k(double L, Modulus k) { return kg_params(L, k, true); }

WaveParams kg_hill_from_k(double L, Modulus k) { return kg_params(L, k, false); }

Modulus kg_k_from_c(double L, double c) {
    require_period(L);
    if (!(c >= 0.0) || c >= 1.0) {
        throw std::domain_error("KG speed must lie in [0,1)");
    }
    const double kmin = kg_k_min(L);
    if (c == 0.0) return Modulus(kmin);
    auto cr = [L](double k) {
        const double om = kg_params(L, Modulus(k), false).omega;
        return om >= 1.0 ? 0.0 : std::sqrt(1.0 - om);
    };
    const double hi = 0.9999994;
    if (c >= cr(hi)) {
        throw std::domain_error("speed c = " + std::to_string(c) +
                                " outside the attainable range for this period");
    }
    const double k = bisect([&](double kk) { return cr(kk) - c; }, kmin, hi, 1e-15);
    return Modulus(k);
}

WaveParams nls_from_k(double L, Modulus k) {
    require_period(L);
    const double kv = k.value();
    require_cnoidal_modulus(kv);
    const double bigK = complete_elliptic(k).bigK;
    WaveParams p;
    p.model = Model::NLS;
    p.L = L;
    p.k = kv;
    p.omega = 16.0 * bigK * bigK * (2.0 * kv * kv - 1.0) / (L * L);
    p.amplitude = std::sqrt(2.0 * p.omega) * kv / std::sqrt(2.0 * kv * kv - 1.0);
    p.scale = 4.0 * bigK / L;
    return p;
}

Modulus nls_k_from_omega(double L, double omega) {
    require_period(L);
    if (!(omega > 0.0)) {
        throw std::domain_error("NLS frequency omega must be positive");
    }
    auto f = [&](double k) { return nls_from_k(L, Modulus(k)).omega - omega; };
    const double lo = kInvSqrt2 + 1e-9;
    const double hi = 0.9999994;
    if (f(hi) <= 0.0) {
        throw std::domain_error("omega outside the attainable range for this period");
    }
    if (f(lo) >= 0.0) {
        throw std::domain_error("omega below the attainable range for this period");
    }
    return Modulus(bisect(f, lo, hi, 1e-15));
}

double profile(const WaveParams& params, double x) {
    return params.amplitude * jacobi(params.scale * x, params.modulus()).cn;
}

double profile_deriv(const WaveParams& params, double x) {
    const JacobiTriple j = jacobi(params.scale * x, params.modulus());
    return -params.amplitude * params.scale * j.sn * j.dn;
}

double profile_deriv2(const WaveParams& params, double x) {
    const double phi = profile(params, x);
    if (params.model == Model::KG) {
        return (phi - phi * phi * phi) / params.omega;
    }
    return params.omega * phi - phi * phi * phi;
}

SampledProfile sample(const WaveParams& params, int N) {
    if (N < 32 || N % 2 != 0) {
        throw std::domain_error("sample count must be even and >= 32");
    }
    SampledProfile s;
    s.params = params;
    s.xs.resize(N);
    s.values.resize(N);
    for (int j = 0; j < N; ++j) {
        s.xs[j] = static_cast<double>(j) * params.L / N;
        s.values[j] = profile(params, s.xs[j]);
    }
    return s;
}

double ode_residual(const SampledProfile& prof) {
    const int N = static_cast<int>(prof.values.size());
    if (N < 128) {
        throw std::domain_error("ode_residual needs at least 128 samples");
    }
    const WaveParams& p = prof.params;
    const Eigen::MatrixXd D2 = fourier_diff2(N, p.L);
    const Eigen::MatrixXd D1 = fourier_diff1(N, p.L);
    Eigen::Map<const Eigen::VectorXd> phi(prof.values.data(), N);
    const Eigen::VectorXd phixx = D2 * phi;
    const Eigen::VectorXd phix = D1 * phi;

    double res = 0.0;
    for (int j = 0; j < N; ++j) {
        const double f = phi[j];
        const double lhs = (p.model == Model::KG)
                               ? -p.omega * phixx[j] + f - f * f * f
                               : -phixx[j] + p.omega * f - f * f * f;
        res = std::max(res, std::abs(lhs));
    }

    // First-integral form. The integration constant comes from the root
    // relations: beta1^2 beta2^2 = 4A with beta2^2 - beta1^2 = 2 (KG) and
    // beta3^2 - beta1^2 = 2 omega (NLS).
    const double a2 = p.amplitude * p.amplitude;
    double quad = 0.0;
    if (p.model == Model::KG) {
        const double A = a2 * (a2 - 2.0) / 4.0;
        for (int j = 0; j < N; ++j) {
            const double f = prof.values[j];
            const double rhs = (2.0 * f * f - f * f * f * f + 4.0 * A) / (2.0 * p.omega);
            quad = std::max(quad, std::abs(phix[j] * phix[j] - rhs));
        }
    } else {
        const double A = a2 * (a2 - 2.0 * p.omega) / 4.0;
        for (int j = 0; j < N; ++j) {
            const double f = prof.values[j];
            const double rhs = (2.0 * p.omega * f * f - f * f * f * f + 4.0 * A) / 2.0;
            quad = std::max(quad, std::abs(phix[j] * phix[j] - rhs));
        }
    }
    return std::max(res, quad);
}

}  // namespace cnoidal
