#ifndef CNOIDAL_STABILITY_HPP
#define CNOIDAL_STABILITY_HPP

#include <optional>
#include <string>

#include "cnoidal/index.hpp"
#include "cnoidal/waves.hpp"

namespace cnoidal {

enum class Outcome { OrbitallyUnstable, OrbitallyStable, Inconclusive };

const char* outcome_name(Outcome o);

// Critical constants of the wave family at period L. cstar and c_k1 exist
// only when the corresponding modulus is admissible for the traveling branch.
struct RegimeBounds {
    double kstar;                 // root of 2E = K
    double k1;                    // root of K = 2
    double omegastar;             // NLS frequency at kstar
    std::optional<double> cstar;  // KG speed at kstar
    std::optional<double> c_k1;   // KG speed at k1; absent => empty regime
};

struct StabilityVerdict {
    Model model;
    double L;
    double k;
    double parameter;  // c for KG, omega for NLS
    double dpp;
    int constrained_n;
    int constrained_z;
    Outcome outcome;
    std::string reason;
    RegimeBounds bounds;
};

struct PotentialWellReport {
    double P_value;        // closed-form action value of the wave
    double d_level;        // potential-well level d_omega (equals P_value)
    double scaling_check;  // relative defect of P_omega = sqrt(omega) P_1
};

// Both returned routes to d''(omega); they are required to agree to 1e-4.
struct DppOmega {
    double finite_difference;
    double chi_solve;
};

// Closed form of int_0^L (phi')^2 for the KG family.
double phi_prime_l2(double L, Modulus k);

// d''(c) = m(k) + n(k) with analytic K', E' and the chain rule through
// omega(k). Requires the admissible traveling branch.
double dpp_c(double L, Modulus k);

// Independent witness: central finite differences of d'(c) = -c int (phi')^2
// along the family, with relative step 1e-4 in c.
double dpp_c_fd(double L, Modulus k, double rel_step = 1e-4);

// d''(omega) two ways: finite differences of d'(omega) = (1/2) int phi^2 and
// the deflated solve of L2 chi = phi returning -(chi, phi).
DppOmega dpp_omega(double L, double omega, int N = 512);

PotentialWellReport potential_well(double L, Modulus k);

// Root of K(k) - 2 on [0.75, 0.85].
Modulus find_k1();

RegimeBounds regime_bounds(double L);

// parameter = c for KG (in [0,1)), omega for NLS (> 0).
StabilityVerdict verdict(Model model, double L, double parameter, int N = 256);

}  // namespace cnoidal

#endif
