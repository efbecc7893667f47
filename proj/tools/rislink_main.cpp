// Command-line front end: binds scenario configuration files to the
// simulator's operations and sweep experiments.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 infeasible budget (`budget --strict`).

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "rislink/channel.hpp"
#include "rislink/config.hpp"
#include "rislink/errors.hpp"
#include "rislink/kernels.hpp"
#include "rislink/montecarlo.hpp"
#include "rislink/phase_control.hpp"

namespace fs = std::filesystem;
using namespace rislink;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    std::string format = "csv";
    int threads = 0;
};

Scenario load(const GlobalOpts& g) {
    Scenario sc = g.config_path.empty() ? default_scenario() : load_scenario(g.config_path);
    if (g.seed_set) sc.experiment.master_seed = g.seed;
    if (g.threads > 0) sc.experiment.threads = g.threads;
    if (sc.jitter.tr().exceeds_small_angle() || sc.jitter.rr().exceeds_small_angle())
        std::cerr << "warning: RMS jitter above 5 mrad; the small-angle model is stretched\n";
    return sc;
}

fs::path out_dir(const GlobalOpts& g) {
    std::string dir = g.out_dir;
    if (dir.empty()) {
        const char* env = std::getenv("RISLINK_OUTDIR");
        dir = env != nullptr ? env : ".";
    }
    fs::create_directories(dir);
    return dir;
}

void write_result(const GlobalOpts& g, const Scenario& sc, const SweepResult& res,
                  const std::string& stem) {
    const fs::path dir = out_dir(g);
    const fs::path data = dir / (stem + (g.format == "json" ? ".json" : ".csv"));
    std::ofstream os(data);
    if (g.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const PointRecord& p : res.points) {
            nlohmann::json row;
            for (const auto& [k, v] : p.coords) row[k] = v;
            for (const auto& [k, v] : p.values) row[k] = v;
            row["trials"] = p.trials;
            row["seed"] = p.seed;
            j.push_back(row);
        }
        os << j.dump(2) << "\n";
    } else {
        write_csv(res, os);
    }
    std::ofstream ms(dir / (stem + "_manifest.json"));
    write_manifest(res, sc, ms);
    std::cout << "wrote " << data.string() << "\n";
}

double db(double lin) { return 10.0 * std::log10(lin); }

int run_sweep(const GlobalOpts& g, const std::string& name) {
    const Scenario sc = load(g);
    const ExperimentKind kind = experiment_from_name(name);
    const ExperimentSpec spec = ExperimentSpec::from_scenario(kind, sc);
    const SweepResult res = run_experiment(spec, sc);
    write_result(g, sc, res, experiment_name(kind));
    return 0;
}

int run_pixel_gain(const GlobalOpts& g, const std::vector<double>& attenuations) {
    const Scenario sc = load(g);
    const ExperimentSpec spec = ExperimentSpec::from_scenario(ExperimentKind::pixel_gain_maps, sc);
    // Maps at the configured jitter, plus one map per requested boresight
    // attenuation with the isotropic sigma solved for it.
    write_result(g, sc, run_experiment(spec, sc), "pixel_gain_maps");
    for (double a : attenuations) {
        const double sigma =
            solve_sigma_for_boresight_attenuation(a, sc.optics_spec(true), sc.optics.quadrature);
        std::cout << "boresight attenuation " << a * 100.0 << "% <- isotropic sigma = "
                  << sigma * 1e3 << " mrad\n";
        Scenario at = sc;
        at.jitter = JitterSection{sigma, sigma, 0.0, sigma, sigma, 0.0};
        const std::string stem =
            "pixel_gain_maps_att" + std::to_string(static_cast<int>(std::lround(a * 100.0)));
        write_result(g, at, run_experiment(spec, at), stem);
    }
    return 0;
}

int run_channel(const GlobalOpts& g) {
    const Scenario sc = load(g);
    const ChannelWorkspace ws = build_channel_workspace(sc);
    const CascadedChannel ch = cascaded_channel(sc, ws, sc.experiment.master_seed);
    const fs::path path = out_dir(g) / "channel.csv";
    std::ofstream os(path);
    os.precision(12);
    os << "n,g_re,g_im,g_abs,baseline_re,baseline_im,h_tr,h_rr,mean_power\n";
    for (std::size_t i = 0; i < ch.g.size(); ++i)
        os << i << "," << ch.g[i].real() << "," << ch.g[i].imag() << "," << std::abs(ch.g[i]) << ","
           << ch.baseline[i].real() << "," << ch.baseline[i].imag() << "," << ch.irradiance_tr[i]
           << "," << ch.irradiance_rr[i] << "," << ws.mean_power[i] << "\n";
    std::cout << "wrote " << path.string() << "\n"
              << "sum E|g_n|^2 = " << ws.sum_mean_power << " (" << db(ws.sum_mean_power)
              << " dB), seed " << ch.seed << "\n";
    return 0;
}

int run_estimate(const GlobalOpts& g) {
    const Scenario sc = load(g);
    const ChannelWorkspace ws = build_channel_workspace(sc);
    const double gamma = std::pow(10.0, sc.pilot.gamma_pilot_db / 10.0);
    const double sigma_sq = calibrated_noise_variance(sc, ws, gamma);
    const int m = sc.pilot.auto_length
                      ? required_pilot_length(sc.pixel_count(), sc.pilot.target_nmse, gamma)
                      : sc.pilot.length;
    PilotPlan plan{m, sc.pixel_count(), sc.pilot.kind, sc.pilot.pilot_power, sigma_sq};
    const PilotMatrix phi = make_pilot_matrix(plan, sc.experiment.master_seed);
    Rng rng = make_rng(trial_seed(sc.experiment.master_seed, 0));
    const CascadedChannel ch = cascaded_channel(sc, ws, mix64(sc.experiment.master_seed));
    const auto y = simulate_pilot_rx(phi, ch.g, plan.pilot_power, sigma_sq, rng);
    EstimationResult est = plan.kind == PilotKind::unitary_dft
                               ? ls_estimate_unitary(phi, y, plan.pilot_power)
                               : ls_estimate_general(phi, y, plan.pilot_power);
    est.nmse = nmse(est.g_hat, ch.g);
    const double realized_gamma =
        plan.pilot_power * kernels::sum_abs2(ch.g.data(), ch.g.size()) / sigma_sq;
    nlohmann::json j;
    j["method"] = est.method;
    j["M"] = m;
    j["N"] = sc.pixel_count();
    j["empirical_nmse"] = est.nmse;
    j["predicted_nmse"] = predicted_nmse(sc.pixel_count(), m, realized_gamma);
    j["gamma_pilot_db"] = db(realized_gamma);
    j["op_count"] = est.op_count;
    j["seed"] = sc.experiment.master_seed;
    const fs::path path = out_dir(g) / "estimate.json";
    std::ofstream os(path);
    os << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\nwrote " << path.string() << "\n";
    return 0;
}

int run_adapt(const GlobalOpts& g) {
    const Scenario sc = load(g);
    const ChannelWorkspace ws = build_channel_workspace(sc);
    const CascadedChannel ch = cascaded_channel(sc, ws, sc.experiment.master_seed);
    const ControlState st = adapt_phases(ch.g, sc.control.adapt);
    const fs::path path = out_dir(g) / "adapt_trace.csv";
    std::ofstream os(path);
    os.precision(12);
    os << "iteration,objective\n";
    for (std::size_t i = 0; i < st.objective_trace.size(); ++i)
        os << i << "," << st.objective_trace[i] << "\n";
    const double optimum = kernels::sum_abs(ch.g.data(), ch.g.size());
    std::cout << "iterations " << st.iterations << (st.converged ? " (converged)" : " (cap hit)")
              << ", final |g^H theta| = " << st.objective_trace.back()
              << ", optimum sum|g_n| = " << optimum << "\nwrote " << path.string() << "\n";
    return 0;
}

int run_budget(const GlobalOpts& g, bool strict) {
    const Scenario sc = load(g);
    const int n = sc.pixel_count();
    const double gamma = std::pow(10.0, sc.pilot.gamma_pilot_db / 10.0);
    const int m_req = required_pilot_length(n, sc.pilot.target_nmse, gamma);
    const int q_max = max_quantization_depth(n, sc.budget.budget, sc.pilot.target_nmse, gamma);
    const int q_used = sc.budget.auto_bits ? q_max : sc.budget.budget.component_bits;
    const double payload = 2.0 * n * q_used;
    const OverheadReport rep = overhead_feasible(m_req, sc.budget.budget, payload);
    std::cout << "N = " << n << ", target NMSE = " << sc.pilot.target_nmse << ", gamma_pilot = "
              << sc.pilot.gamma_pilot_db << " dB\n"
              << "M_required = " << m_req << "\n"
              << "Q_max = " << q_max << " bits, Q_used = " << q_used << "\n"
              << "payload B_CSI = " << payload << " bits\n"
              << "tau_pilot = " << rep.tau_pilot << ", tau_FB = " << rep.tau_fb
              << ", slack = " << rep.slack << "\n"
              << (rep.feasible ? "feasible" : "INFEASIBLE") << "\n";
    if (!rep.feasible && strict)
        throw InfeasibleError("budget: combined pilot+feedback overhead exceeds the duty limit");
    return 0;
}

int run_baseline_cmd(const GlobalOpts& g) {
    const Scenario sc = load(g);
    const BaselineReport rep = run_baselines(sc, sc.experiment.trials, sc.experiment.master_seed);
    nlohmann::json j;
    j["realistic_snr_db"] = rep.realistic_snr_db;
    j["perfect_csi_snr_db"] = rep.perfect_csi_snr_db;
    j["gap_quantized_db"] = rep.gap_quantized_db;
    j["capacity_gap_bits_per_s_hz"] = rep.capacity_gap_bits;
    j["link_budget_db"] = rep.jitter_budget_db;
    j["zero_jitter_budget_db"] = rep.zero_jitter_budget_db;
    j["jitter_loss_db"] = rep.jitter_loss_db;
    j["boresight_signal_power_w"] = rep.boresight_signal_power_w;
    const fs::path path = out_dir(g) / "baselines.json";
    std::ofstream os(path);
    os << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\nwrote " << path.string() << "\n";
    return 0;
}

int run_show_config(const GlobalOpts& g) {
    std::cout << emit_scenario(load(g));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted optical wireless link simulator and budgeting tool"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config_path, "Scenario configuration file (INI-style)");
    auto* seed_opt = app.add_option("--seed", g.seed, "Master seed override");
    app.add_option("--out", g.out_dir, "Output directory (default: $RISLINK_OUTDIR or .)");
    app.add_option("--format", g.format, "Result format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", g.threads, "Worker threads (affects speed, never results)");

    auto* pixel = app.add_subcommand("pixel-gain", "Ideal/long-exposure gain maps and deviation");
    std::vector<double> attenuations;
    pixel->add_option("--attenuation", attenuations,
                      "Boresight attenuation targets to solve sigma for (e.g. 0.1 0.2 0.4)");
    auto* channel = app.add_subcommand("channel", "Dump one cascaded channel realization");
    auto* estimate = app.add_subcommand("estimate", "Single pilot + LS estimation run");
    auto* adapt = app.add_subcommand("adapt", "Quantized phase-adaptation trace");
    auto* budget = app.add_subcommand("budget", "Pilot length, Q_max and overhead feasibility");
    bool strict = false;
    budget->add_flag("--strict", strict, "Exit 4 when the budget is infeasible");
    auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep experiment");
    std::string experiment;
    sweep->add_option("experiment", experiment,
                      "nmse_vs_M | nmse_vs_snr | effsnr_vs_nmse | pilot_vs_wavelength | "
                      "pilot_vs_area | complexity | cs_feedback | pixel_gain_maps")
        ->required();
    auto* baselines = app.add_subcommand("baselines", "Idealized baseline comparison report");
    auto* show = app.add_subcommand("show-config", "Print the effective configuration");

    try {
        app.parse(argc, argv);
        g.seed_set = seed_opt->count() > 0;
        if (pixel->parsed()) return run_pixel_gain(g, attenuations);
        if (channel->parsed()) return run_channel(g);
        if (estimate->parsed()) return run_estimate(g);
        if (adapt->parsed()) return run_adapt(g);
        if (budget->parsed()) return run_budget(g, strict);
        if (sweep->parsed()) return run_sweep(g, experiment);
        if (baselines->parsed()) return run_baseline_cmd(g);
        if (show->parsed()) return run_show_config(g);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << " (estimate " << e.estimate << ", bound "
                  << e.error_bound << ")\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
