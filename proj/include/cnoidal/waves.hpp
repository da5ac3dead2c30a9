#ifndef CNOIDAL_WAVES_HPP
#define CNOIDAL_WAVES_HPP

#include <optional>
#include <vector>

#include "cnoidal/elliptic.hpp"

namespace cnoidal {

enum class Model { KG, NLS };

// Full parameter record of one cnoidal wave phi(x) = amplitude * cn(scale*x, k)
// on the period cell [0,L). For KG, omega = L^2 / (16 K^2 (2k^2-1)) and the
// speed c = sqrt(1-omega) exists only on the admissible branch omega <= 1.
// For NLS, omega = 16 K^2 (2k^2-1) / L^2 is the standing frequency.
struct WaveParams {
    Model model;
    double L;
    double k;
    double omega;
    std::optional<double> c;  // KG traveling speed; absent for NLS or omega > 1
    double amplitude;
    double scale;  // 4K(k)/L

    Modulus modulus() const { return Modulus(k); }
    double speed() const;  // throws if c is absent
};

struct SampledProfile {
    WaveParams params;
    std::vector<double> xs;
    std::vector<double> values;
};

// Smallest admissible modulus for the KG traveling branch at period L,
// i.e. the root of 4 K(k) sqrt(2k^2-1) = L.
double kg_k_min(double L);

// KG traveling wave. Requires L <= 4 K(k) sqrt(2k^2-1) so that omega <= 1;
// the boundary case gives c = 0.
WaveParams kg_from_k(double L, Modulus k);

// Same wave family without the speed requirement: the Hill-operator analysis
// (L1, D1, Lame eigenpairs) is valid for every k in (1/sqrt2, 1) even where
// omega > 1 and no traveling interpretation exists.
WaveParams kg_hill_from_k(double L, Modulus k);

// Inverse of the monotone map k -> c at fixed L, to 1e-10 in c.
Modulus kg_k_from_c(double L, double c);

WaveParams nls_from_k(double L, Modulus k);

// Inverse of the monotone map k -> omega at fixed L, to 1e-10 relative.
Modulus nls_k_from_omega(double L, double omega);

double profile(const WaveParams& params, double x);
double profile_deriv(const WaveParams& params, double x);
double profile_deriv2(const WaveParams& params, double x);

// Uniform left-closed grid xs[j] = j L / N. N must be even and >= 32.
SampledProfile sample(const WaveParams& params, int N);

// Max-norm defect of the profile ODE (phi'' by spectral differentiation),
// combined with the defect of the first-integral (quadrature) form whose
// integration constant is recovered from the root relations. Needs >= 128
// samples. Diagnostic only; never throws on large residuals.
double ode_residual(const SampledProfile& prof);

}  // namespace cnoidal

#endif
