#include "cnoidal/evolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>

#include "cnoidal/numerics.hpp"

namespace cnoidal {

namespace {

using cplx = std::complex<double>;

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Complex-to-complex FFT pair on N points with cached plans. forward() scales
// by 1/N so that coefficients are the actual Fourier coefficients.
class Fft {
  public:
    Fft(int N, double L) : N_(N), L_(L), buf_(fftw_alloc_complex(N)) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_1d(N, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(N, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        xi_.resize(N);
        for (int m = 0; m < N; ++m) {
            const int mm = (m <= N / 2) ? m : m - N;
            xi_[m] = 2.0 * M_PI * mm / L;
        }
    }
    ~Fft() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(std::vector<cplx>& a) {
        run(a, fwd_);
        for (auto& z : a) z /= static_cast<double>(N_);
    }
    void inverse(std::vector<cplx>& a) { run(a, bwd_); }

    const std::vector<double>& xi() const { return xi_; }
    int size() const { return N_; }
    double period() const { return L_; }

  private:
    void run(std::vector<cplx>& a, fftw_plan plan) {
        auto* b = reinterpret_cast<cplx*>(buf_);
        std::copy(a.begin(), a.end(), b);
        fftw_execute(plan);
        std::copy(b, b + N_, a.begin());
    }

    int N_;
    double L_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan bwd_;
    std::vector<double> xi_;
};

std::vector<cplx> to_complex(const std::vector<double>& r) {
    std::vector<cplx> out(r.size());
    for (size_t i = 0; i < r.size(); ++i) out[i] = r[i];
    return out;
}

// Fourier coefficients of a real or complex field.
std::vector<cplx> coeffs(Fft& fft, const std::vector<cplx>& f) {
    std::vector<cplx> a = f;
    fft.forward(a);
    return a;
}

double h1_norm2(Fft& fft, const std::vector<cplx>& f) {
    const auto a = coeffs(fft, f);
    double s = 0.0;
    for (int m = 0; m < fft.size(); ++m) {
        s += (1.0 + fft.xi()[m] * fft.xi()[m]) * std::norm(a[m]);
    }
    return fft.period() * s;
}

double l2_norm2(Fft& fft, const std::vector<cplx>& f) {
    const auto a = coeffs(fft, f);
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return fft.period() * s;
}

bool finite_and_bounded(const std::vector<double>& f) {
    for (double x : f) {
        if (!std::isfinite(x) || std::abs(x) > 1e6) return false;
    }
    return true;
}

bool finite_and_bounded(const std::vector<cplx>& f) {
    for (const auto& z : f) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
            std::abs(z.real()) > 1e6 || std::abs(z.imag()) > 1e6)
            return false;
    }
    return true;
}

void subtract_mean(std::vector<double>& f) {
    double m = 0.0;
    for (double x : f) m += x;
    m /= f.size();
    for (double& x : f) x -= m;
}

void subtract_mean(std::vector<cplx>& f) {
    cplx m = 0.0;
    for (const auto& z : f) m += z;
    m /= static_cast<double>(f.size());
    for (auto& z : f) z -= m;
}

}  // namespace

FieldState make_wave_state(const WaveParams& params, int N) {
    if (N < 32 || N % 2 != 0) {
        throw std::domain_error("state grid must be even and >= 32");
    }
    FieldState s;
    s.model = params.model;
    s.t = 0.0;
    s.N = N;
    s.L = params.L;
    if (params.model == Model::KG) {
        const double c = params.speed();
        s.u.resize(N);
        s.v.resize(N);
        for (int j = 0; j < N; ++j) {
            const double x = j * params.L / N;
            s.u[j] = profile(params, x);
            s.v[j] = c * profile_deriv(params, x);
        }
    } else {
        s.psi.resize(N);
        for (int j = 0; j < N; ++j) {
            s.psi[j] = profile(params, j * params.L / N);
        }
    }
    return s;
}

ConservedPair conserved(const FieldState& state) {
    Fft fft(state.N, state.L);
    const double h = state.L / state.N;
    if (state.model == Model::KG) {
        auto a = to_complex(state.u);
        fft.forward(a);
        for (int m = 0; m < state.N; ++m) a[m] *= cplx(0.0, fft.xi()[m]);
        fft.inverse(a);
        double energy = 0.0, momentum = 0.0;
        for (int j = 0; j < state.N; ++j) {
            const double ux = a[j].real();
            const double u = state.u[j];
            const double v = state.v[j];
            energy += 0.5 * (ux * ux + v * v + u * u * (1.0 - 0.5 * u * u));
            momentum += ux * v;
        }
        return {energy * h, momentum * h};
    }
    auto a = state.psi;
    fft.forward(a);
    for (int m = 0; m < state.N; ++m) a[m] *= cplx(0.0, fft.xi()[m]);
    fft.inverse(a);
    double energy = 0.0, mass = 0.0;
    for (int j = 0; j < state.N; ++j) {
        const double n2 = std::norm(state.psi[j]);
        energy += 0.5 * (std::norm(a[j]) - 0.5 * n2 * n2);
        mass += 0.5 * n2;
    }
    return {energy * h, mass * h};
}

// ---------------------------------------------------------------------------
// NLS stepper

struct NlsStepper::Impl {
    Impl(int N, double L) : fft(N, L) {}
    Fft fft;
};

NlsStepper::NlsStepper(int N, double L) : impl_(std::make_unique<Impl>(N, L)) {}
NlsStepper::~NlsStepper() = default;

bool NlsStepper::step(FieldState& state, double dt, bool zero_mean_project) {
    if (state.model != Model::NLS) {
        throw std::domain_error("NlsStepper needs an NLS state");
    }
    auto& psi = state.psi;
    const auto& xi = impl_->fft.xi();
    for (auto& z : psi) {
        z *= std::exp(cplx(0.0, 0.5 * dt * std::norm(z)));
    }
    impl_->fft.forward(psi);
    for (int m = 0; m < state.N; ++m) {
        psi[m] *= std::exp(cplx(0.0, -xi[m] * xi[m] * dt));
    }
    impl_->fft.inverse(psi);
    for (auto& z : psi) {
        z *= std::exp(cplx(0.0, 0.5 * dt * std::norm(z)));
    }
    if (zero_mean_project) subtract_mean(psi);
    state.t += dt;
    return finite_and_bounded(psi);
}

// ---------------------------------------------------------------------------
// KG stepper

struct KgStepper::Impl {
    Impl(int N, double L) : fft(N, L), work(N) {}

    void accel(const std::vector<double>& u, std::vector<double>& a_out) {
        for (int j = 0; j < fft.size(); ++j) work[j] = u[j];
        fft.forward(work);
        for (int m = 0; m < fft.size(); ++m) {
            work[m] *= -fft.xi()[m] * fft.xi()[m];
        }
        fft.inverse(work);
        a_out.resize(fft.size());
        for (int j = 0; j < fft.size(); ++j) {
            a_out[j] = work[j].real() - u[j] + u[j] * u[j] * u[j];
        }
    }

    Fft fft;
    std::vector<cplx> work;
    std::vector<double> acc;
};

KgStepper::KgStepper(int N, double L) : impl_(std::make_unique<Impl>(N, L)) {}
KgStepper::~KgStepper() = default;

double KgStepper::max_stable_dt() const {
    const double xi_max = M_PI * impl_->fft.size() / impl_->fft.period();
    return 2.0 / std::sqrt(xi_max * xi_max + 1.0);
}

bool KgStepper::step(FieldState& state, double dt, bool zero_mean_project) {
    if (state.model != Model::KG) {
        throw std::domain_error("KgStepper needs a KG state");
    }
    if (dt > max_stable_dt()) {
        throw std::domain_error("KG time step exceeds the Verlet stability bound "
                                "2/omega_max (~ 0.64 L/N)");
    }
    auto& u = state.u;
    auto& v = state.v;
    auto& a = impl_->acc;
    impl_->accel(u, a);
    for (int j = 0; j < state.N; ++j) v[j] += 0.5 * dt * a[j];
    for (int j = 0; j < state.N; ++j) u[j] += dt * v[j];
    if (!finite_and_bounded(u)) return false;
    impl_->accel(u, a);
    for (int j = 0; j < state.N; ++j) v[j] += 0.5 * dt * a[j];
    if (zero_mean_project) {
        subtract_mean(u);
        subtract_mean(v);
    }
    state.t += dt;
    return finite_and_bounded(u) && finite_and_bounded(v);
}

// ---------------------------------------------------------------------------
// Orbital distance

namespace {

// Coarse stage: the translation correlation evaluated at every grid shift via
// one FFT, returning the best shift.
double best_grid_shift(Fft& fft, const std::vector<cplx>& corr_coeffs,
                       bool use_abs) {
    std::vector<cplx> g = corr_coeffs;
    fft.inverse(g);  // sum_m A_m e^{+i 2pi m j/N} evaluated at shifts -x_j
    int jbest = 0;
    double best = -1e300;
    for (int j = 0; j < fft.size(); ++j) {
        const double val = use_abs ? std::abs(g[j]) : g[j].real();
        if (val > best) {
            best = val;
            jbest = j;
        }
    }
    // inverse() evaluates the series at e^{+i...}, i.e. at shift s = -x_j.
    return -jbest * fft.period() / fft.size();
}

}  // namespace

double orbital_distance(const FieldState& state, const WaveParams& params) {
    if (state.model != params.model) {
        throw std::domain_error("state and wave model mismatch");
    }
    if (std::abs(state.L - params.L) > 1e-12 * params.L) {
        throw std::domain_error("state and wave period mismatch");
    }
    const int N = state.N;
    const double L = state.L;
    Fft fft(N, L);
    const auto& xi = fft.xi();

    if (state.model == Model::KG) {
        const double c = params.speed();
        std::vector<double> phi(N), q(N);
        for (int j = 0; j < N; ++j) {
            const double x = j * L / N;
            phi[j] = profile(params, x);
            q[j] = c * profile_deriv(params, x);
        }
        const auto uh = coeffs(fft, to_complex(state.u));
        const auto vh = coeffs(fft, to_complex(state.v));
        const auto ph = coeffs(fft, to_complex(phi));
        const auto qh = coeffs(fft, to_complex(q));
        std::vector<cplx> A(N);
        for (int m = 0; m < N; ++m) {
            A[m] = (1.0 + xi[m] * xi[m]) * uh[m] * std::conj(ph[m]) +
                   vh[m] * std::conj(qh[m]);
        }
        const double s0 = best_grid_shift(fft, A, false);

        auto dist_at = [&](double s) {
            std::vector<cplx> du(N), dv(N);
            for (int j = 0; j < N; ++j) {
                const double x = j * L / N + s;
                du[j] = state.u[j] - profile(params, x);
                dv[j] = state.v[j] - c * profile_deriv(params, x);
            }
            return std::sqrt(std::max(0.0, h1_norm2(fft, du) + l2_norm2(fft, dv)));
        };
        const double h = L / N;
        const double s = golden_min(dist_at, s0 - h, s0 + h);
        return dist_at(s);
    }

    std::vector<cplx> phi(N);
    for (int j = 0; j < N; ++j) phi[j] = profile(params, j * L / N);
    const auto uh = coeffs(fft, state.psi);
    const auto ph = coeffs(fft, phi);
    std::vector<cplx> A(N);
    for (int m = 0; m < N; ++m) {
        A[m] = (1.0 + xi[m] * xi[m]) * uh[m] * std::conj(ph[m]);
    }
    const double s0 = best_grid_shift(fft, A, true);

    auto dist_at = [&](double s) {
        // Optimal rotation for this shift is the phase of <u, T_s phi>_{H1}.
        cplx ip = 0.0;
        std::vector<cplx> shifted(N);
        for (int j = 0; j < N; ++j) {
            shifted[j] = profile(params, j * L / N + s);
        }
        const auto sh = coeffs(fft, shifted);
        for (int m = 0; m < N; ++m) {
            ip += (1.0 + xi[m] * xi[m]) * uh[m] * std::conj(sh[m]);
        }
        const cplx rot = std::exp(cplx(0.0, std::arg(ip)));
        std::vector<cplx> du(N);
        for (int j = 0; j < N; ++j) du[j] = state.psi[j] - rot * shifted[j];
        return std::sqrt(std::max(0.0, h1_norm2(fft, du)));
    };
    const double h = L / N;
    const double s = golden_min(dist_at, s0 - h, s0 + h);
    return dist_at(s);
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

// Zero-mean band-limited noise with unit coefficients drawn from the seeded
// generator; scaled afterwards to the requested norm.
std::vector<cplx> noise_field(int N, std::mt19937_64& rng, bool complex_field,
                              Perturbation kind, int mode) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> f(N, 0.0);
    const int mmax = 8;
    auto add_mode = [&](int m, cplx amp) {
        for (int j = 0; j < N; ++j) {
            const double ph = 2.0 * M_PI * m * j / N;
            f[j] += amp * cplx(std::cos(ph), std::sin(ph));
        }
    };
    if (kind == Perturbation::Mode) {
        const cplx a(gauss(rng), gauss(rng));
        add_mode(mode, a);
        if (!complex_field) add_mode(-mode, std::conj(a));
        else add_mode(-mode, cplx(gauss(rng), gauss(rng)));
    } else {
        for (int m = 1; m <= mmax; ++m) {
            const cplx a(gauss(rng), gauss(rng));
            add_mode(m, a);
            if (!complex_field) {
                add_mode(-m, std::conj(a));
            } else {
                add_mode(-m, cplx(gauss(rng), gauss(rng)));
            }
        }
    }
    return f;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (!(config.T > 0.0) || !(config.dt > 0.0)) {
        throw std::domain_error("experiment needs positive T and dt");
    }
    const int N = config.N;
    const double L = config.L;
    const Modulus k(config.k);
    const WaveParams w =
        (config.model == Model::KG) ? kg_from_k(L, k) : nls_from_k(L, k);
    FieldState state = make_wave_state(w, N);
    Fft fft(N, L);

    std::mt19937_64 rng(config.seed);
    if (config.perturbation != Perturbation::None && config.eps > 0.0) {
        if (config.model == Model::KG) {
            auto pu = noise_field(N, rng, false, config.perturbation, config.mode);
            auto pv = noise_field(N, rng, false, config.perturbation, config.mode);
            const double norm =
                std::sqrt(h1_norm2(fft, pu) + l2_norm2(fft, pv));
            for (int j = 0; j < N; ++j) {
                state.u[j] += config.eps * pu[j].real() / norm;
                state.v[j] += config.eps * pv[j].real() / norm;
            }
        } else {
            auto p = noise_field(N, rng, true, config.perturbation, config.mode);
            const double norm = std::sqrt(h1_norm2(fft, p));
            for (int j = 0; j < N; ++j) {
                state.psi[j] += config.eps * p[j] / norm;
            }
        }
    }
    if (config.zero_mean) {
        if (config.model == Model::KG) {
            subtract_mean(state.u);
            subtract_mean(state.v);
        } else {
            subtract_mean(state.psi);
        }
    }

    ExperimentResult res;
    const ConservedPair c0 = conserved(state);
    res.initial_distance = orbital_distance(state, w);
    res.series.times.push_back(0.0);
    res.series.distances.push_back(res.initial_distance);
    res.energy_drift_series.push_back(0.0);
    res.second_drift_series.push_back(0.0);
    res.max_distance = res.initial_distance;

    const long nsteps = std::lround(config.T / config.dt);
    const long stride = std::max(1L, std::lround(config.sample_dt / config.dt));

    std::unique_ptr<KgStepper> kg;
    std::unique_ptr<NlsStepper> nls;
    if (config.model == Model::KG) kg = std::make_unique<KgStepper>(N, L);
    else nls = std::make_unique<NlsStepper>(N, L);

    for (long i = 1; i <= nsteps; ++i) {
        const bool ok = (config.model == Model::KG)
                            ? kg->step(state, config.dt, config.zero_mean)
                            : nls->step(state, config.dt, config.zero_mean);
        if (!ok) {
            res.blew_up = true;
            res.blowup_time = i * config.dt;
            break;
        }
        if (i % stride == 0 || i == nsteps) {
            const double t = i * config.dt;
            const double d = orbital_distance(state, w);
            res.series.times.push_back(t);
            res.series.distances.push_back(d);
            res.max_distance = std::max(res.max_distance, d);
            const ConservedPair c = conserved(state);
            const double edrift = std::abs(c.energy - c0.energy) /
                                  std::max(std::abs(c0.energy), 1e-300);
            const double sdrift =
                std::abs(c.momentum_or_mass - c0.momentum_or_mass) /
                std::max(std::abs(c0.momentum_or_mass), 1e-12);
            res.energy_drift_series.push_back(edrift);
            res.second_drift_series.push_back(sdrift);
            res.energy_drift = std::max(res.energy_drift, edrift);
            res.second_drift = std::max(res.second_drift, sdrift);
        }
    }
    return res;
}

}  // namespace cnoidal
