#ifndef CNOIDAL_EVOLUTION_HPP
#define CNOIDAL_EVOLUTION_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "cnoidal/waves.hpp"

namespace cnoidal {

// One field snapshot on the uniform grid. KG carries (u, v) = (u, u_t) as two
// real vectors; NLS carries the complex field psi.
struct FieldState {
    Model model;
    double t = 0.0;
    int N = 0;
    double L = 0.0;
    std::vector<double> u, v;
    std::vector<std::complex<double>> psi;
};

struct ConservedPair {
    double energy;            // E for KG, script-E for NLS
    double momentum_or_mass;  // F for KG, script-F (half mass) for NLS
};

struct OrbitDistanceSeries {
    std::vector<double> times;
    std::vector<double> distances;
};

enum class Perturbation { None, ZeroMeanRandom, Mode };

struct ExperimentConfig {
    Model model;
    double L;
    double k;
    Perturbation perturbation = Perturbation::None;
    int mode = 1;          // for Perturbation::Mode
    double eps = 0.0;      // perturbation size in the model's energy norm
    double T = 10.0;
    double dt = 1e-3;
    int N = 256;
    std::uint64_t seed = 0;
    double sample_dt = 0.1;
    bool zero_mean = true;  // project onto the zero-mean class each step
};

struct ExperimentResult {
    OrbitDistanceSeries series;
    std::vector<double> energy_drift_series;  // relative drift at each sample
    std::vector<double> second_drift_series;
    double initial_distance = 0.0;
    double max_distance = 0.0;
    double energy_drift = 0.0;  // max relative drift over the samples
    double second_drift = 0.0;
    bool blew_up = false;
    double blowup_time = 0.0;
};

// Exact wave snapshot: (phi, c phi') for KG, phi for NLS, at t = 0.
FieldState make_wave_state(const WaveParams& params, int N);

ConservedPair conserved(const FieldState& state);

// Strang splitting for the cubic NLS: half nonlinear phase rotation, exact
// Fourier propagation of the free part, half nonlinear again. Unconditionally
// stable; exactly mass-preserving without projection.
class NlsStepper {
  public:
    NlsStepper(int N, double L);
    ~NlsStepper();
    NlsStepper(const NlsStepper&) = delete;
    NlsStepper& operator=(const NlsStepper&) = delete;

    // Returns false once the field stops being finite (blow-up).
    bool step(FieldState& state, double dt, bool zero_mean_project = false);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Stoermer-Verlet (velocity form) for u_tt = u_xx - u + u^3 with the spectral
// Laplacian. Requires dt <= 2/omega_max, omega_max^2 = (pi N / L)^2 + 1,
// i.e. dt <~ (2/pi) L/N.
class KgStepper {
  public:
    KgStepper(int N, double L);
    ~KgStepper();
    KgStepper(const KgStepper&) = delete;
    KgStepper& operator=(const KgStepper&) = delete;

    double max_stable_dt() const;
    bool step(FieldState& state, double dt, bool zero_mean_project = false);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Distance from the state to the orbit of the wave: infimum over translations
// (KG, X = H^1 x L^2 norm) or over translations and phase rotations (NLS, H^1
// norm). A coarse FFT correlation pass locates the best grid shift; the exact
// distance is then minimized directly over the surrounding cell.
double orbital_distance(const FieldState& state, const WaveParams& params);

ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace cnoidal

#endif
