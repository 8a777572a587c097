// Command-line front end: series generation, regime classification, envelope
// simulation, single-point runs, parameter sweeps, and heatmap rendering.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "parc/config.hpp"
#include "parc/heatmap.hpp"
#include "parc/io.hpp"
#include "parc/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCellFailure = 3;

struct CommonOpts {
    std::string config_path;
    std::optional<double> f_avg, delta_f, delta1, kappa, gamma21, data_rate, lambda;
    std::optional<double> gamma1_scale;
    std::optional<long> washout, n_points, warmup;
    std::optional<std::string> benchmark;
    std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "experiment config file (INI)");
    cmd->add_option("--f-avg", o.f_avg, "average drive amplitude");
    cmd->add_option("--delta-f", o.delta_f, "drive modulation depth");
    cmd->add_option("--delta1", o.delta1, "mode-1 detuning");
    cmd->add_option("--kappa", o.kappa, "frequency-matching detuning");
    cmd->add_option("--gamma21", o.gamma21, "damping ratio");
    cmd->add_option("--data-rate", o.data_rate, "input data rate (samples/second)");
    cmd->add_option("--gamma1-scale", o.gamma1_scale, "gamma_1 in s^-1");
    cmd->add_option("--lambda", o.lambda, "ridge regularization");
    cmd->add_option("--washout", o.washout, "symbols discarded before the split");
    cmd->add_option("--n-points", o.n_points, "benchmark series length");
    cmd->add_option("--warmup", o.warmup, "warm-up symbols");
    cmd->add_option("--benchmark", o.benchmark, "mackey_glass | rossler | lorenz");
    cmd->add_option("--workers", o.workers, "sweep worker threads");
}

parc::ExperimentConfig build_config(const CommonOpts& o) {
    parc::ExperimentConfig cfg;
    if (!o.config_path.empty()) cfg = parc::load_config(o.config_path);
    if (o.benchmark) {
        auto sys = parc::chaotic_system_from_string(*o.benchmark);
        auto keep = cfg.benchmarks.front();
        cfg.benchmarks.front() = parc::SeriesSpec::defaults(sys);
        cfg.benchmarks.front().n_points = keep.n_points;
        cfg.benchmarks.front().transient_discard = keep.transient_discard;
    }
    if (o.f_avg) cfg.encoding.f_avg = *o.f_avg;
    if (o.delta_f) cfg.encoding.delta_f = *o.delta_f;
    if (o.delta1) cfg.model.delta1 = *o.delta1;
    if (o.kappa) cfg.model.kappa = *o.kappa;
    if (o.gamma21) cfg.model.gamma21 = *o.gamma21;
    if (o.gamma1_scale) cfg.encoding.gamma1_scale = *o.gamma1_scale;
    if (o.data_rate) cfg.encoding.set_data_rate(*o.data_rate);
    if (o.lambda) cfg.lambda = *o.lambda;
    if (o.washout) cfg.split.washout = static_cast<std::size_t>(*o.washout);
    if (o.n_points)
        for (auto& b : cfg.benchmarks) b.n_points = static_cast<std::size_t>(*o.n_points);
    if (o.warmup) cfg.encoding.warmup_symbols = static_cast<int>(*o.warmup);
    if (o.workers) cfg.workers = *o.workers;
    return cfg;
}

void write_columns_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& headers,
                       const std::vector<const std::vector<double>*>& cols) {
    std::ofstream os(path);
    if (!os) throw parc::Error("cannot open " + path.string());
    for (std::size_t c = 0; c < headers.size(); ++c)
        os << headers[c] << (c + 1 < headers.size() ? ',' : '\n');
    std::size_t rows = 0;
    for (auto* c : cols) rows = std::max(rows, c->size());
    char buf[40];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (r < cols[c]->size()) {
                std::snprintf(buf, sizeof buf, "%.17g", (*cols[c])[r]);
                os << buf;
            }
            os << (c + 1 < cols.size() ? ',' : '\n');
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-mode parametric-oscillator reservoir computing"};
    app.require_subcommand(1);

    // ---- gen-series ----
    auto* gen = app.add_subcommand("gen-series", "generate a chaotic benchmark series");
    std::string gen_system = "mackey_glass", gen_out = "series.txt";
    long gen_n = 2000;
    bool gen_binary = false;
    std::optional<double> gen_dt;
    std::optional<long> gen_transient, gen_substeps;
    gen->add_option("--system", gen_system, "mackey_glass | rossler | lorenz");
    gen->add_option("--n", gen_n, "number of samples");
    gen->add_option("--sample-interval", gen_dt, "sampling interval (system time)");
    gen->add_option("--transient", gen_transient, "samples discarded before recording");
    gen->add_option("--substeps", gen_substeps, "internal RK4 steps per sample");
    gen->add_option("--out", gen_out, "output path");
    gen->add_flag("--binary", gen_binary, "write binary float64 instead of text");

    // ---- classify ----
    auto* cls = app.add_subcommand("classify", "regime classification");
    CommonOpts cls_opts;
    add_common(cls, cls_opts);
    bool cls_dynamics = false;
    std::string cls_grid_out;
    std::string cls_axis1 = "f_avg 0 50 21", cls_axis2 = "delta1 -10 10 21";
    cls->add_flag("--dynamics", cls_dynamics, "resolve comb character by simulation");
    cls->add_option("--grid-out", cls_grid_out, "write a regime grid CSV instead");
    cls->add_option("--axis1", cls_axis1, "grid axis 1: '<param> <min> <max> <steps>'");
    cls->add_option("--axis2", cls_axis2, "grid axis 2: '<param> <min> <max> <steps>'");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "integrate the envelope equations");
    CommonOpts sim_opts;
    add_common(sim, sim_opts);
    double sim_duration = 100.0;
    long sim_samples = 2000;
    double sim_psi2 = 1e-3;
    std::string sim_out = "trajectory.csv";
    sim->add_option("--duration", sim_duration, "integration span (tau)");
    sim->add_option("--samples", sim_samples, "trajectory samples");
    sim->add_option("--seed-psi2", sim_psi2, "initial psi2 (real)");
    sim->add_option("--out", sim_out, "trajectory CSV path");

    // ---- run ----
    auto* run = app.add_subcommand("run", "full single-point pipeline");
    CommonOpts run_opts;
    add_common(run, run_opts);
    std::string run_outdir;
    bool run_all = false;
    run->add_option("--outdir", run_outdir, "directory for traces and predictions");
    run->add_flag("--all-benchmarks", run_all, "evaluate mackey_glass, rossler and lorenz");

    // ---- sweep ----
    auto* swp = app.add_subcommand("sweep", "parameter-grid NMSE map");
    CommonOpts swp_opts;
    add_common(swp, swp_opts);
    std::string swp_axis1, swp_axis2, swp_out = "grid.csv";
    swp->add_option("--axis1", swp_axis1, "axis 1: '<param> <min> <max> <steps>'");
    swp->add_option("--axis2", swp_axis2, "axis 2: '<param> <min> <max> <steps>'");
    swp->add_option("--out", swp_out, "grid CSV path (JSON sidecar written next to it)");

    // ---- render ----
    auto* ren = app.add_subcommand("render", "render a grid CSV as an SVG heatmap");
    std::string ren_grid, ren_out = "map.svg", ren_scale = "log10";
    ren->add_option("--grid", ren_grid, "grid CSV path")->required();
    ren->add_option("--out", ren_out, "SVG output path");
    ren->add_option("--scale", ren_scale, "log10 | linear");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            auto spec = parc::SeriesSpec::defaults(parc::chaotic_system_from_string(gen_system));
            spec.n_points = static_cast<std::size_t>(gen_n);
            if (gen_dt) spec.sample_interval = *gen_dt;
            if (gen_transient) spec.transient_discard = static_cast<std::size_t>(*gen_transient);
            if (gen_substeps) spec.substeps = static_cast<int>(*gen_substeps);
            const auto series = parc::gen_series(spec);
            if (gen_binary)
                parc::write_series_binary(gen_out, spec, series);
            else
                parc::write_series_text(gen_out, spec, series);
            std::printf("wrote %zu samples to %s\n", series.size(), gen_out.c_str());
            return kExitOk;
        }

        if (*cls) {
            auto cfg = build_config(cls_opts);
            if (!cls_grid_out.empty()) {
                std::istringstream a1(cls_axis1), a2(cls_axis2);
                auto parse = [](std::istringstream& ss) {
                    std::string name;
                    parc::AxisSpec a;
                    if (!(ss >> name >> a.min >> a.max >> a.steps))
                        throw parc::ConfigError("bad axis spec");
                    a.param = parc::param_axis_from_string(name);
                    return a;
                };
                const auto grid = parc::regime_grid(parse(a1), parse(a2), cfg.model,
                                                    cfg.encoding.f_avg, cfg.workers);
                parc::write_regime_grid_csv(grid, cls_grid_out);
                std::printf("wrote regime grid to %s\n", cls_grid_out.c_str());
                return kExitOk;
            }
            parc::Regime regime =
                cls_dynamics
                    ? parc::classify_regime_dynamics(cfg.model, cfg.encoding.f_avg,
                                                     cfg.integrator, cfg.comb)
                    : parc::classify_regime(cfg.model, cfg.encoding.f_avg);
            std::printf("f=%g delta1=%g kappa=%g gamma21=%g -> %s\n", cfg.encoding.f_avg,
                        cfg.model.delta1, cfg.model.kappa, cfg.model.gamma21,
                        parc::to_string(regime).c_str());
            std::printf("f_arnold=%.12g f_upper=%.12g comb_condition=%s\n",
                        parc::arnold_threshold(cfg.model), parc::upper_boundary(cfg.model),
                        parc::comb_condition(cfg.model) ? "true" : "false");
            return kExitOk;
        }

        if (*sim) {
            auto cfg = build_config(sim_opts);
            parc::EnvelopeState init;
            init.psi2 = {sim_psi2, 0.0};
            const auto traj =
                parc::integrate_const(init, cfg.model, cfg.encoding.f_avg, sim_duration,
                                      static_cast<int>(sim_samples), cfg.integrator);
            std::ofstream os(sim_out);
            if (!os) throw parc::Error("cannot open " + sim_out);
            os << "tau,re_psi1,im_psi1,re_psi2,im_psi2,abs2_psi1,abs2_psi2\n";
            char buf[200];
            for (const auto& s : traj.samples) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                              s.tau, s.psi1.real(), s.psi1.imag(), s.psi2.real(), s.psi2.imag(),
                              std::norm(s.psi1), std::norm(s.psi2));
                os << buf;
            }
            std::printf("wrote %zu samples to %s\n", traj.samples.size(), sim_out.c_str());
            return kExitOk;
        }

        if (*run) {
            auto cfg = build_config(run_opts);
            if (run_all) {
                const auto keep = cfg.benchmarks.front();
                cfg.benchmarks.clear();
                for (auto sys : {parc::ChaoticSystem::MackeyGlass, parc::ChaoticSystem::Rossler,
                                 parc::ChaoticSystem::Lorenz}) {
                    auto spec = parc::SeriesSpec::defaults(sys);
                    spec.n_points = keep.n_points;
                    spec.transient_discard = keep.transient_discard;
                    cfg.benchmarks.push_back(spec);
                }
            }
            const auto res = parc::run_point(cfg);
            std::printf("regime: %s\n", parc::to_string(res.regime).c_str());
            bool any_error = false;
            for (const auto& b : res.benchmarks) {
                if (b.error.empty())
                    std::printf("%-14s nmse=%.6g  log10=%.4f  (features kept: %zu)\n",
                                b.name.c_str(), b.nmse, std::log10(b.nmse), b.retained_features);
                else {
                    std::printf("%-14s FAILED: %s\n", b.name.c_str(), b.error.c_str());
                    any_error = true;
                }
            }
            if (!run_outdir.empty()) {
                std::filesystem::create_directories(run_outdir);
                const std::filesystem::path dir(run_outdir);
                write_columns_csv(dir / "trace.csv", {"tau", "abs2_psi2"},
                                  {&res.trace_tau, &res.trace_psi2_sq});
                write_columns_csv(dir / "spectrum.csv", {"dft_magnitude"}, {&res.spectrum});
                for (const auto& b : res.benchmarks) {
                    if (!b.error.empty()) continue;
                    write_columns_csv(dir / ("prediction_" + b.name + ".csv"),
                                      {"truth", "prediction"}, {&b.truth, &b.prediction});
                }
                std::printf("wrote traces to %s\n", run_outdir.c_str());
            }
            return any_error ? kExitCellFailure : kExitOk;
        }

        if (*swp) {
            auto cfg = build_config(swp_opts);
            auto parse_axis = [](const std::string& text) {
                std::istringstream ss(text);
                std::string name;
                parc::AxisSpec a;
                if (!(ss >> name >> a.min >> a.max >> a.steps))
                    throw parc::ConfigError("bad axis spec: " + text);
                a.param = parc::param_axis_from_string(name);
                return a;
            };
            if (!swp_axis1.empty()) cfg.axis1 = parse_axis(swp_axis1);
            if (!swp_axis2.empty()) cfg.axis2 = parse_axis(swp_axis2);
            const auto grid = parc::run_sweep(cfg);
            parc::write_grid_csv(grid, swp_out);
            std::filesystem::path meta(swp_out);
            meta.replace_extension(".meta.json");
            parc::write_grid_meta(grid, cfg, meta);
            std::size_t failures = 0;
            for (const auto& c : grid.cells) failures += c.ok() ? 0 : 1;
            std::printf("wrote %zu cells (%zu failures) to %s\n", grid.cells.size(), failures,
                        swp_out.c_str());
            return failures ? kExitCellFailure : kExitOk;
        }

        if (*ren) {
            const auto grid = parc::read_grid_csv(ren_grid);
            const auto scale = ren_scale == "linear" ? parc::HeatmapScale::Linear
                                                     : parc::HeatmapScale::Log10;
            parc::render_heatmap(grid, scale, ren_out);
            std::printf("wrote %s\n", ren_out.c_str());
            return kExitOk;
        }
    } catch (const parc::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const parc::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
