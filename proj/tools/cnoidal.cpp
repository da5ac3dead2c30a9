// Command-line front end: every quantity the library computes is reachable
// from one subcommand, with deterministic JSON/CSV output (floats printed
// with 17 significant digits so regression baselines are byte-stable).

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "cnoidal/evolution.hpp"
#include "cnoidal/index.hpp"
#include "cnoidal/operators.hpp"
#include "cnoidal/stability.hpp"
#include "cnoidal/waves.hpp"

namespace {

using namespace cnoidal;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

// Minimal ordered JSON writer; keys appear in insertion order so output is
// reproducible byte for byte.
class JsonWriter {
  public:
    JsonWriter& number(const std::string& key, double v) {
        return raw(key, fmt17(v));
    }
    JsonWriter& integer(const std::string& key, long v) {
        return raw(key, std::to_string(v));
    }
    JsonWriter& boolean(const std::string& key, bool v) {
        return raw(key, v ? "true" : "false");
    }
    JsonWriter& text(const std::string& key, const std::string& v) {
        return raw(key, "\"" + json_escape(v) + "\"");
    }
    JsonWriter& null(const std::string& key) { return raw(key, "null"); }
    JsonWriter& object(const std::string& key, const JsonWriter& w) {
        return raw(key, w.str());
    }
    JsonWriter& numbers(const std::string& key, const std::vector<double>& vs) {
        std::string arr = "[";
        for (size_t i = 0; i < vs.size(); ++i) {
            if (i) arr += ",";
            arr += fmt17(vs[i]);
        }
        return raw(key, arr + "]");
    }
    JsonWriter& raw(const std::string& key, const std::string& v) {
        if (!body_.empty()) body_ += ",";
        body_ += "\"" + key + "\":" + v;
        return *this;
    }
    std::string str() const { return "{" + body_ + "}"; }

  private:
    std::string body_;
};

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        throw std::domain_error("cannot open output file: " + out_path);
    }
    f << payload;
    if (!f) {
        throw std::domain_error("write failed: " + out_path);
    }
}

Model parse_model(const std::string& s) {
    if (s == "kg") return Model::KG;
    if (s == "nls") return Model::NLS;
    throw CLI::ValidationError("--model must be kg or nls");
}

int worker_count() {
    if (const char* env = std::getenv("CNOIDAL_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

struct SweepRowResult {
    double k = 0.0;
    std::optional<double> value;
    std::string error;
};

// Fan the k-grid out across a worker pool; assembly stays in k-order.
std::vector<SweepRowResult> run_sweep(const std::vector<double>& ks,
                                      const std::function<double(double)>& fn) {
    std::vector<SweepRowResult> rows(ks.size());
    const int workers =
        std::max(1, std::min<int>(worker_count(), static_cast<int>(ks.size())));
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    auto body = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= ks.size()) return;
            rows[i].k = ks[i];
            try {
                rows[i].value = fn(ks[i]);
            } catch (const std::exception& e) {
                rows[i].error = e.what();
            }
        }
    };
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    return rows;
}

std::string index_report_json(const IndexReport& r) {
    JsonWriter w;
    w.integer("unconstrained_n", r.unconstrained_n)
        .integer("unconstrained_z", r.unconstrained_z)
        .number("d_value", r.d_value)
        .integer("n0", r.n0)
        .integer("z0", r.z0)
        .integer("constrained_n", r.constrained_n)
        .integer("constrained_z", r.constrained_z);
    return w.str();
}

int dispatch(int argc, char** argv) {
    CLI::App app{"cnoidal periodic waves of the cubic Klein-Gordon and "
                 "Schroedinger equations: spectra, index counts, stability "
                 "functionals, and time evolution"};
    app.require_subcommand(1);

    // --- elliptic ---
    auto* sc_ell = app.add_subcommand("elliptic", "complete elliptic integrals");
    double ell_k = 0.5;
    std::string ell_out;
    sc_ell->add_option("--k", ell_k, "modulus in (0,1)")->required();
    sc_ell->add_option("--out", ell_out, "output path (default stdout)");
    sc_ell->callback([&] {
        const EllipticPair p = complete_elliptic(Modulus(ell_k));
        JsonWriter w;
        w.number("k", ell_k).number("K", p.bigK).number("E", p.bigE);
        emit(w.str() + "\n", ell_out);
    });

    // --- wave ---
    auto* sc_wave = app.add_subcommand("wave", "sample a cnoidal profile");
    std::string wave_model = "kg", wave_out;
    double wave_L = 2.0 * M_PI, wave_k = 0.9;
    int wave_N = 256;
    sc_wave->add_option("--model", wave_model, "kg or nls")->required();
    sc_wave->add_option("--L", wave_L, "period")->required();
    sc_wave->add_option("--k", wave_k, "modulus in (1/sqrt2,1)")->required();
    sc_wave->add_option("--samples", wave_N, "grid size (even, >= 32)");
    sc_wave->add_option("--out", wave_out, "CSV output path");
    sc_wave->callback([&] {
        const Model m = parse_model(wave_model);
        const WaveParams p = (m == Model::KG) ? kg_from_k(wave_L, Modulus(wave_k))
                                              : nls_from_k(wave_L, Modulus(wave_k));
        const SampledProfile s = sample(p, wave_N);
        std::string csv = "x,phi\n";
        for (size_t j = 0; j < s.xs.size(); ++j) {
            csv += fmt17(s.xs[j]) + "," + fmt17(s.values[j]) + "\n";
        }
        emit(csv, wave_out);
    });

    // --- spectrum ---
    auto* sc_spec = app.add_subcommand("spectrum", "eigenvalues and counts of a "
                                                   "linearized operator");
    std::string spec_model = "kg", spec_op = "L1", spec_out;
    double spec_L = 2.0 * M_PI, spec_k = 0.9;
    int spec_N = 256;
    bool spec_constrained = false;
    sc_spec->add_option("--model", spec_model)->required();
    sc_spec->add_option("--op", spec_op, "L1|L2|L3|block")->required();
    sc_spec->add_option("--L", spec_L)->required();
    sc_spec->add_option("--k", spec_k)->required();
    sc_spec->add_option("--N", spec_N, "grid size");
    sc_spec->add_flag("--constrained", spec_constrained,
                      "spectrum on the zero-mean class");
    sc_spec->add_option("--out", spec_out);
    sc_spec->callback([&] {
        const Model m = parse_model(spec_model);
        OperatorKind kind;
        WaveParams p{};
        if (m == Model::KG) {
            if (spec_op == "L1") {
                kind = OperatorKind::KgL1;
                p = kg_hill_from_k(spec_L, Modulus(spec_k));
            } else if (spec_op == "block") {
                kind = OperatorKind::KgBlock;
                p = kg_from_k(spec_L, Modulus(spec_k));
            } else {
                throw CLI::ValidationError("kg supports --op L1 or block");
            }
        } else {
            p = nls_from_k(spec_L, Modulus(spec_k));
            if (spec_op == "L2") kind = OperatorKind::NlsL2;
            else if (spec_op == "L3") kind = OperatorKind::NlsL3;
            else if (spec_op == "block") kind = OperatorKind::NlsBlock;
            else throw CLI::ValidationError("nls supports --op L2, L3 or block");
        }
        const OperatorMatrix M = build(kind, p, spec_N);
        const SpectrumReport r =
            spec_constrained ? constrained_spectrum(M) : spectrum(M);
        std::vector<double> head(r.eigenvalues.begin(),
                                 r.eigenvalues.begin() +
                                     std::min<size_t>(10, r.eigenvalues.size()));
        JsonWriter w;
        w.text("model", spec_model)
            .text("op", spec_op)
            .number("L", spec_L)
            .number("k", spec_k)
            .integer("N", spec_N)
            .boolean("constrained", spec_constrained)
            .numbers("eigenvalues", head)
            .integer("n", r.n_neg)
            .integer("z", r.z_dim)
            .number("zero_tol", r.zero_tol);
        emit(w.str() + "\n", spec_out);
    });

    // --- index ---
    auto* sc_idx = app.add_subcommand("index", "constrained index bookkeeping");
    std::string idx_model = "kg", idx_out;
    double idx_L = 2.0 * M_PI, idx_k = 0.9;
    int idx_N = 256;
    sc_idx->add_option("--model", idx_model)->required();
    sc_idx->add_option("--L", idx_L)->required();
    sc_idx->add_option("--k", idx_k)->required();
    sc_idx->add_option("--N", idx_N);
    sc_idx->add_option("--out", idx_out);
    sc_idx->callback([&] {
        const Model m = parse_model(idx_model);
        JsonWriter w;
        w.text("model", idx_model).number("L", idx_L).number("k", idx_k)
            .integer("N", idx_N);
        if (m == Model::KG) {
            const WaveParams hill = kg_hill_from_k(idx_L, Modulus(idx_k));
            w.raw("L1", index_report_json(
                            index_report(OperatorKind::KgL1, hill, idx_N)));
            if (hill.c.has_value()) {
                const WaveParams p = kg_from_k(idx_L, Modulus(idx_k));
                w.raw("block", index_report_json(
                                   index_report(OperatorKind::KgBlock, p, idx_N)));
                const Eigen::Matrix2d D = kg_block_dmatrix(p, idx_N);
                w.raw("dmatrix", "[[" + fmt17(D(0, 0)) + "," + fmt17(D(0, 1)) +
                                     "],[" + fmt17(D(1, 0)) + "," +
                                     fmt17(D(1, 1)) + "]]");
            }
        } else {
            const WaveParams p = nls_from_k(idx_L, Modulus(idx_k));
            w.raw("L2", index_report_json(
                            index_report(OperatorKind::NlsL2, p, idx_N)));
            w.raw("L3", index_report_json(
                            index_report(OperatorKind::NlsL3, p, idx_N)));
            // independent route to D3 with its solver diagnostics
            const GreenSolve gs = auxiliary_y(p, 50000);
            const double d3 = d3_via_ivp(p, 50000).first.value;
            JsonWriter dw;
            dw.number("value", d3)
                .number("theta", *gs.theta)
                .number("p_period_defect", gs.p_period_defect)
                .number("wronskian_defect", *gs.wronskian_defect);
            w.object("d3_ivp", dw);
        }
        emit(w.str() + "\n", idx_out);
    });

    // --- critical ---
    auto* sc_crit = app.add_subcommand("critical", "critical moduli and the "
                                                   "derived speed/frequency bounds");
    double crit_L = 2.0 * M_PI;
    std::string crit_out;
    sc_crit->add_option("--L", crit_L, "period (default 2pi)");
    sc_crit->add_option("--out", crit_out);
    sc_crit->callback([&] {
        const RegimeBounds b = regime_bounds(crit_L);
        JsonWriter w;
        w.number("L", crit_L).number("kstar", b.kstar).number("k1", b.k1);
        if (b.cstar) w.number("cstar", *b.cstar); else w.null("cstar");
        w.number("omegastar", b.omegastar);
        if (b.c_k1) w.number("c_k1", *b.c_k1); else w.null("c_k1");
        emit(w.str() + "\n", crit_out);
    });

    // --- verdict ---
    auto* sc_ver = app.add_subcommand("verdict", "stability verdict for one wave");
    std::string ver_model = "kg", ver_out;
    double ver_L = 2.0 * M_PI;
    int ver_N = 256;
    double ver_c = -1.0, ver_omega = -1.0;
    sc_ver->add_option("--model", ver_model)->required();
    sc_ver->add_option("--L", ver_L)->required();
    auto* opt_c = sc_ver->add_option("--c", ver_c, "KG speed in [0,1)");
    auto* opt_om = sc_ver->add_option("--omega", ver_omega, "NLS frequency > 0");
    opt_c->excludes(opt_om);
    sc_ver->add_option("--N", ver_N);
    sc_ver->add_option("--out", ver_out);
    sc_ver->callback([&] {
        const Model m = parse_model(ver_model);
        double param;
        if (m == Model::KG) {
            if (opt_c->count() == 0)
                throw CLI::ValidationError("kg verdict needs --c");
            param = ver_c;
        } else {
            if (opt_om->count() == 0)
                throw CLI::ValidationError("nls verdict needs --omega");
            param = ver_omega;
        }
        const StabilityVerdict v = verdict(m, ver_L, param, ver_N);
        JsonWriter bw;
        bw.number("kstar", v.bounds.kstar).number("k1", v.bounds.k1);
        if (v.bounds.cstar) bw.number("cstar", *v.bounds.cstar);
        else bw.null("cstar");
        bw.number("omegastar", v.bounds.omegastar);
        if (v.bounds.c_k1) bw.number("c_k1", *v.bounds.c_k1);
        else bw.null("c_k1");
        JsonWriter w;
        w.text("model", ver_model)
            .number("L", v.L)
            .number("k", v.k)
            .number(m == Model::KG ? "c" : "omega", v.parameter)
            .number("dpp", v.dpp)
            .integer("constrained_n", v.constrained_n)
            .integer("constrained_z", v.constrained_z)
            .text("verdict", outcome_name(v.outcome))
            .text("reason", v.reason)
            .object("bounds", bw);
        if (m == Model::KG) {
            const PotentialWellReport pw = potential_well(ver_L, Modulus(v.k));
            JsonWriter pwj;
            pwj.number("P_value", pw.P_value)
                .number("d_level", pw.d_level)
                .number("scaling_check", pw.scaling_check);
            w.object("potential_well", pwj);
        }
        emit(w.str() + "\n", ver_out);
    });

    // --- sweep ---
    auto* sc_sweep = app.add_subcommand("sweep", "tabulate a quantity over a "
                                                 "k-grid (figure data)");
    std::string sw_quantity = "d3", sw_out;
    double sw_L = 2.0 * M_PI, sw_kmin = 0.72, sw_kmax = 0.99;
    int sw_steps = 20, sw_ivp_steps = 100000;
    sc_sweep->add_option("--quantity", sw_quantity, "dpp|d3|d1")->required();
    sc_sweep->add_option("--L", sw_L)->required();
    sc_sweep->add_option("--kmin", sw_kmin)->required();
    sc_sweep->add_option("--kmax", sw_kmax)->required();
    sc_sweep->add_option("--steps", sw_steps, "number of rows")->required();
    sc_sweep->add_option("--ivp-steps", sw_ivp_steps, "RK4 steps for d3");
    sc_sweep->add_option("--out", sw_out, "CSV output path");
    sc_sweep->callback([&] {
        if (sw_steps < 1) throw CLI::ValidationError("--steps must be >= 1");
        if (!(sw_kmin < sw_kmax) && sw_steps > 1)
            throw CLI::ValidationError("need kmin < kmax");
        std::function<double(double)> fn;
        std::string header;
        if (sw_quantity == "d1") {
            header = "k,D1";
            fn = [&](double k) { return d1_closed_form(sw_L, Modulus(k)).value; };
        } else if (sw_quantity == "d3") {
            header = "k,D3";
            fn = [&](double k) {
                return d3_via_ivp(nls_from_k(sw_L, Modulus(k)), sw_ivp_steps)
                    .first.value;
            };
        } else if (sw_quantity == "dpp") {
            header = "k,dpp";
            fn = [&](double k) { return dpp_c(sw_L, Modulus(k)); };
        } else {
            throw CLI::ValidationError("--quantity must be dpp, d3 or d1");
        }
        std::vector<double> ks(sw_steps);
        for (int i = 0; i < sw_steps; ++i) {
            ks[i] = (sw_steps == 1)
                        ? sw_kmin
                        : sw_kmin + (sw_kmax - sw_kmin) * i / (sw_steps - 1);
        }
        const auto rows = run_sweep(ks, fn);
        std::string csv = header + "\n";
        std::string log;
        for (const auto& r : rows) {
            if (r.value) {
                csv += fmt17(r.k) + "," + fmt17(*r.value) + "\n";
            } else {
                log += "k=" + fmt17(r.k) + ": " + r.error + "\n";
            }
        }
        emit(csv, sw_out);
        if (!log.empty()) {
            if (sw_out.empty()) std::cerr << log;
            else emit(log, sw_out + ".log");
        }
    });

    // --- evolve ---
    auto* sc_evo = app.add_subcommand("evolve", "time evolution with orbital "
                                                "distance tracking");
    std::string evo_model = "nls", evo_out, evo_pert = "zero-mean-random";
    double evo_L = 2.0 * M_PI, evo_k = 0.85, evo_eps = 1e-3, evo_T = 10.0,
           evo_dt = 1e-3, evo_sample = 0.1;
    int evo_N = 256, evo_mode = 1;
    std::uint64_t evo_seed = 1;
    bool evo_no_zero_mean = false;
    sc_evo->add_option("--model", evo_model)->required();
    sc_evo->add_option("--L", evo_L)->required();
    sc_evo->add_option("--k", evo_k)->required();
    sc_evo->add_option("--eps", evo_eps, "perturbation size");
    sc_evo->add_option("--T", evo_T)->required();
    sc_evo->add_option("--dt", evo_dt)->required();
    sc_evo->add_option("--N", evo_N);
    sc_evo->add_option("--seed", evo_seed);
    sc_evo->add_option("--perturbation", evo_pert,
                       "none|zero-mean-random|mode-m");
    sc_evo->add_option("--mode", evo_mode, "mode index for mode-m");
    sc_evo->add_option("--sample-dt", evo_sample);
    sc_evo->add_flag("--no-zero-mean", evo_no_zero_mean,
                     "disable the zero-mean projection");
    sc_evo->add_option("--out", evo_out, "CSV output path");
    sc_evo->callback([&] {
        ExperimentConfig cfg;
        cfg.model = parse_model(evo_model);
        cfg.L = evo_L;
        cfg.k = evo_k;
        cfg.eps = evo_eps;
        cfg.T = evo_T;
        cfg.dt = evo_dt;
        cfg.N = evo_N;
        cfg.seed = evo_seed;
        cfg.mode = evo_mode;
        cfg.sample_dt = evo_sample;
        cfg.zero_mean = !evo_no_zero_mean;
        if (evo_pert == "none" || evo_eps == 0.0)
            cfg.perturbation = Perturbation::None;
        else if (evo_pert == "zero-mean-random")
            cfg.perturbation = Perturbation::ZeroMeanRandom;
        else if (evo_pert == "mode-m")
            cfg.perturbation = Perturbation::Mode;
        else
            throw CLI::ValidationError(
                "--perturbation must be none, zero-mean-random or mode-m");
        const ExperimentResult res = run_experiment(cfg);
        std::string csv = "t,distance,energy_drift,second_invariant_drift\n";
        for (size_t i = 0; i < res.series.times.size(); ++i) {
            csv += fmt17(res.series.times[i]) + "," +
                   fmt17(res.series.distances[i]) + "," +
                   fmt17(res.energy_drift_series[i]) + "," +
                   fmt17(res.second_drift_series[i]) + "\n";
        }
        if (res.blew_up) {
            csv += "# blow-up at t=" + fmt17(res.blowup_time) + "\n";
        }
        emit(csv, evo_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage message
        return 64;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 2;
    }
}
