#include "cnoidal/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cnoidal {

namespace {
constexpr int kMaxAgmIterations = 40;
constexpr double kAgmTolerance = 1e-15;
}  // namespace

Modulus::Modulus(double k) : k_(k) {
    if (!std::isfinite(k) || k <= 0.0 || k >= 1.0) {
        throw std::domain_error("elliptic modulus must satisfy 0 < k < 1, got " +
                                std::to_string(k));
    }
    if (k * k > 1.0 - 1e-12) {
        throw std::domain_error("elliptic modulus too close to 1 (k^2 > 1 - 1e-12); "
                                "refusing the solitary-wave limit");
    }
}

EllipticPair complete_elliptic(Modulus k) {
    const double kv = k.value();
    double a = 1.0;
    double b = std::sqrt(1.0 - kv * kv);
    double c = kv;
    double sum = 0.5 * c * c;
    double pow2 = 0.5;  // 2^{i-1} starting at i = 0
    int it = 0;
    while (std::abs(a - b) > kAgmTolerance * a && it < kMaxAgmIterations) {
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        c = 0.5 * (a - b);
        pow2 *= 2.0;
        sum += pow2 * c * c;
        a = an;
        b = bn;
        ++it;
    }
    const double bigK = M_PI / (2.0 * a);
    const double bigE = bigK * (1.0 - sum);
    return {bigK, bigE};
}

JacobiTriple jacobi(double u, Modulus k) {
    if (!std::isfinite(u)) {
        throw std::domain_error("jacobi argument must be finite");
    }
    const double kv = k.value();
    const double fourK = 4.0 * complete_elliptic(k).bigK;
    u = std::fmod(u, fourK);
    if (u < 0.0) u += fourK;

    // Descending Landen chain k -> k1 -> ... until the modulus is negligible.
    double moduli[kMaxAgmIterations];
    int n = 0;
    double kc = kv;
    double scale = 1.0;
    while (kc > 1e-12 && n < kMaxAgmIterations) {
        const double kp = std::sqrt((1.0 - kc) * (1.0 + kc));
        kc = (1.0 - kp) / (1.0 + kp);
        moduli[n++] = kc;
        scale *= 1.0 + kc;
    }

    // At the bottom of the chain the functions are circular.
    const double v = u / scale;
    double sn = std::sin(v);
    double cn = std::cos(v);
    double dn = 1.0;

    // Climb back up with the ascending form of the transformation.
    for (int i = n - 1; i >= 0; --i) {
        const double ki = moduli[i];
        const double den = 1.0 + ki * sn * sn;
        const double sn_up = (1.0 + ki) * sn / den;
        const double cn_up = cn * dn / den;
        const double dn_up = (1.0 - ki * sn * sn) / den;
        sn = sn_up;
        cn = cn_up;
        dn = dn_up;
    }
    return {sn, cn, dn};
}

double d_bigK_dk(Modulus k) {
    const double kv = k.value();
    const auto [bigK, bigE] = complete_elliptic(k);
    return (bigE - (1.0 - kv * kv) * bigK) / (kv * (1.0 - kv * kv));
}

double d_bigE_dk(Modulus k) {
    const double kv = k.value();
    const auto [bigK, bigE] = complete_elliptic(k);
    return (bigE - bigK) / kv;
}

}  // namespace cnoidal
