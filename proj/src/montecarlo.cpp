#include "rislink/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "rislink/config.hpp"
#include "rislink/errors.hpp"
#include "rislink/kernels.hpp"
#include "rislink/phase_control.hpp"

namespace rislink {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

struct Moments {
    double mean{};
    double std_error{};
};

Moments reduce(const std::vector<double>& samples) {
    Moments m;
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double v : samples) sum += v;
    m.mean = sum / n;
    double ss = 0.0;
    for (double v : samples) ss += (v - m.mean) * (v - m.mean);
    m.std_error = samples.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return m;
}

// Trials indexed 0..trials-1 run on `threads` workers into preassigned
// slots; the reduction order is the trial order, so results do not depend
// on the worker count.
std::vector<double> run_trials(int trials, int threads, std::uint64_t pseed,
                               const std::function<double(int, std::uint64_t)>& trial_fn) {
    std::vector<double> samples(trials);
    const int workers = std::max(1, std::min(threads, trials));
    if (workers == 1) {
        for (int t = 0; t < trials; ++t) samples[t] = trial_fn(t, trial_seed(pseed, t));
        return samples;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1))
                    samples[t] = trial_fn(t, trial_seed(pseed, t));
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return samples;
}

PilotMatrix pilot_for(const Scenario& sc, int m, std::uint64_t seed) {
    PilotPlan plan;
    plan.m = m;
    plan.n = sc.pixel_count();
    plan.kind = sc.pilot.kind;
    plan.pilot_power = sc.pilot.pilot_power;
    return make_pilot_matrix(plan, seed);
}

EstimationResult run_ls(const PilotMatrix& phi, std::span<const cplx> y, double pilot_power) {
    return phi.kind == PilotKind::unitary_dft ? ls_estimate_unitary(phi, y, pilot_power)
                                              : ls_estimate_general(phi, y, pilot_power);
}

// --- individual experiments -------------------------------------------------

void sweep_nmse_vs_m(const ExperimentSpec& spec, const Scenario& sc, SweepResult& out) {
    const ChannelWorkspace ws = build_channel_workspace(sc);
    const double gamma = db_to_linear(sc.pilot.gamma_pilot_db);
    const double sigma_sq = calibrated_noise_variance(sc, ws, gamma);
    for (std::size_t pi = 0; pi < sc.experiment.m_grid.size(); ++pi) {
        const int m = static_cast<int>(sc.experiment.m_grid[pi]);
        const std::uint64_t pseed = point_seed(spec.master_seed, pi);
        const PilotMatrix phi = pilot_for(sc, m, pseed);
        auto trial = [&](int, std::uint64_t tseed) {
            Rng rng = make_rng(tseed);
            const CascadedChannel ch = cascaded_channel(sc, ws, mix64(tseed));
            const auto y = simulate_pilot_rx(phi, ch.g, sc.pilot.pilot_power, sigma_sq, rng);
            return nmse(run_ls(phi, y, sc.pilot.pilot_power).g_hat, ch.g);
        };
        const Moments mo = reduce(run_trials(spec.trials, spec.threads, pseed, trial));
        PointRecord rec;
        rec.coords = {{"M", static_cast<double>(m)}};
        rec.values = {{"mean_nmse", mo.mean}, {"stderr", mo.std_error}};
        rec.trials = spec.trials;
        rec.seed = pseed;
        out.points.push_back(std::move(rec));
    }
}

void sweep_nmse_vs_snr(const ExperimentSpec& spec, const Scenario& sc, SweepResult& out) {
    const ChannelWorkspace ws = build_channel_workspace(sc);
    const int m = sc.pilot.auto_length
                      ? required_pilot_length(sc.pixel_count(), sc.pilot.target_nmse,
                                              db_to_linear(sc.pilot.gamma_pilot_db))
                      : sc.pilot.length;
    for (std::size_t pi = 0; pi < sc.experiment.gamma_db_grid.size(); ++pi) {
        const double gamma_db = sc.experiment.gamma_db_grid[pi];
        const double sigma_sq = calibrated_noise_variance(sc, ws, db_to_linear(gamma_db));
        const std::uint64_t pseed = point_seed(spec.master_seed, pi);
        const PilotMatrix phi = pilot_for(sc, m, pseed);
        auto trial = [&](int, std::uint64_t tseed) {
            Rng rng = make_rng(tseed);
            const CascadedChannel ch = cascaded_channel(sc, ws, mix64(tseed));
            const auto y = simulate_pilot_rx(phi, ch.g, sc.pilot.pilot_power, sigma_sq, rng);
            return nmse(run_ls(phi, y, sc.pilot.pilot_power).g_hat, ch.g);
        };
        const Moments mo = reduce(run_trials(spec.trials, spec.threads, pseed, trial));
        PointRecord rec;
        rec.coords = {{"gamma_db", gamma_db}};
        rec.values = {{"mean_nmse", mo.mean}, {"stderr", mo.std_error}};
        rec.trials = spec.trials;
        rec.seed = pseed;
        out.points.push_back(std::move(rec));
    }
}

// Effective-SNR conversion experiment: complex-fading channels (Rayleigh
// magnitudes), an isotropic estimate perturbation with per-trial exact NMSE,
// phase-only control from the estimate, SNR evaluated on the true channel.
void sweep_effsnr(const ExperimentSpec& spec, const Scenario& sc, SweepResult& out) {
    Scenario fading = sc;
    fading.link.complex_fading = true;
    fading.turbulence.tr.regime = TurbulenceRegime::none;
    fading.turbulence.rr.regime = TurbulenceRegime::none;
    const ChannelWorkspace ws = build_channel_workspace(fading);
    const int n = fading.pixel_count();
    for (std::size_t pi = 0; pi < sc.experiment.epsilon_grid.size(); ++pi) {
        const double eps = sc.experiment.epsilon_grid[pi];
        const std::uint64_t pseed = point_seed(spec.master_seed, pi);
        auto trial = [&](int, std::uint64_t tseed) {
            Rng rng = make_rng(tseed);
            const CascadedChannel ch = cascaded_channel(fading, ws, mix64(tseed));
            std::vector<cplx> err(n);
            for (auto& e : err) e = circular_gaussian(rng, 1.0);
            const double g_norm = kernels::sum_abs2(ch.g.data(), n);
            const double e_norm = kernels::sum_abs2(err.data(), n);
            const double scale = std::sqrt(eps * g_norm / e_norm);
            std::vector<cplx> g_hat(n);
            for (int i = 0; i < n; ++i) g_hat[i] = ch.g[i] + scale * err[i];
            const std::vector<double> phases = optimal_phases(g_hat);
            std::vector<cplx> theta(n);
            for (int i = 0; i < n; ++i) theta[i] = std::polar(1.0, phases[i]);
            const double achieved = std::norm(combined_amplitude(ch.g, theta));
            const double ideal = kernels::sum_abs(ch.g.data(), n);
            return achieved / (ideal * ideal);
        };
        const Moments mo = reduce(run_trials(spec.trials, spec.threads, pseed, trial));
        PointRecord rec;
        rec.coords = {{"epsilon", eps}};
        rec.values = {{"mean_ratio", mo.mean}, {"stderr", mo.std_error}};
        rec.trials = spec.trials;
        rec.seed = pseed;
        out.points.push_back(std::move(rec));
    }
}

// Deterministic pilot-length bound sweeps (no sampling): gamma scales with
// the baseline power sum, anchored at the design point of the reference
// scenario.
void sweep_pilot_bound(const ExperimentSpec& spec, const Scenario& sc, SweepResult& out,
                       bool vs_wavelength) {
    const ChannelWorkspace ref_ws = build_channel_workspace(sc);
    const double gamma_ref = db_to_linear(sc.pilot.gamma_pilot_db);
    const double sigma_sq = calibrated_noise_variance(sc, ref_ws, gamma_ref);
    const std::vector<double>& outer =
        vs_wavelength ? sc.experiment.lambda_nm_grid : sc.experiment.pixel_mm_grid;
    const std::vector<double>& inner =
        vs_wavelength ? sc.experiment.pixel_mm_grid : sc.experiment.area_n_grid;
    std::size_t pi = 0;
    for (double a : outer) {
        for (double b : inner) {
            Scenario mod = sc;
            mod.pilot.auto_length = true; // the sweep derives M from the bound
            if (vs_wavelength) {
                mod.geometry.wavelength = a * 1e-9;
                mod.geometry.pixel_width = mod.geometry.pixel_height = b * 1e-3;
            } else {
                mod.geometry.pixel_width = mod.geometry.pixel_height = a * 1e-3;
                const int side = static_cast<int>(std::round(std::sqrt(b)));
                if (side * side != static_cast<int>(b))
                    throw ConfigError("pilot_vs_area: n_grid entries must be perfect squares");
                mod.geometry.grid_nx = mod.geometry.grid_ny = side;
            }
            const ChannelWorkspace ws = build_channel_workspace(mod);
            const double gamma = mod.pilot.pilot_power * ws.sum_mean_power / sigma_sq;
            const int m_req =
                required_pilot_length(mod.pixel_count(), mod.pilot.target_nmse, gamma);
            PointRecord rec;
            if (vs_wavelength)
                rec.coords = {{"lambda_nm", a}, {"pixel_mm", b}};
            else
                rec.coords = {{"pixel_mm", a}, {"N", b}};
            rec.values = {{"m_required", static_cast<double>(m_req)},
                          {"gamma_pilot_db", linear_to_db(gamma)}};
            rec.trials = 1;
            rec.seed = point_seed(spec.master_seed, pi++);
            out.points.push_back(std::move(rec));
        }
    }
    if (!vs_wavelength)
        out.notes.push_back(
            "pixel-width halving quarters the area and scales the required pilot length by ~16x "
            "above the M = N floor (A^2 power law of the mean per-element power); the ~4x figure "
            "sometimes quoted for this sweep is inconsistent with that law and is not reproduced");
}

void sweep_complexity(const ExperimentSpec& spec, const Scenario& sc, SweepResult& out) {
    for (std::size_t pi = 0; pi < sc.experiment.n_grid.size(); ++pi) {
        const int n = static_cast<int>(sc.experiment.n_grid[pi]);
        const int m = 2 * n;
        const std::uint64_t pseed = point_seed(spec.master_seed, pi);
        PilotPlan plan;
        plan.m = m;
        plan.n = n;
        plan.kind = PilotKind::unitary_dft;
        plan.pilot_power = sc.pilot.pilot_power;
        const PilotMatrix phi = make_pilot_matrix(plan, pseed);
        Rng rng = make_rng(trial_seed(pseed, 0));
        std::vector<cplx> g(n);
        for (auto& v : g) v = circular_gaussian(rng, 1.0);
        const auto y = simulate_pilot_rx(phi, g, plan.pilot_power, 1e-3, rng);
        const EstimationResult fast = ls_estimate_unitary(phi, y, plan.pilot_power);
        const EstimationResult slow = ls_estimate_general(phi, y, plan.pilot_power);
        PointRecord rec;
        rec.coords = {{"N", static_cast<double>(n)}};
        rec.values = {{"unitary_macs", static_cast<double>(fast.op_count)},
                      {"general_macs", static_cast<double>(slow.op_count)},
                      {"mac_ratio", static_cast<double>(slow.op_count) /
                                        static_cast<double>(fast.op_count)}};
        rec.trials = 1;
        rec.seed = pseed;
        out.points.push_back(std::move(rec));
    }
}

void sweep_cs_feedback(const ExperimentSpec& spec, const Scenario& sc, SweepResult& out) {
    const ChannelWorkspace ws = build_channel_workspace(sc);
    const double gamma = db_to_linear(sc.pilot.gamma_pilot_db);
    const double sigma_sq = calibrated_noise_variance(sc, ws, gamma);
    const int n = sc.pixel_count();
    const int m = sc.pilot.length;
    const int bits = sc.experiment.cs_bits;
    for (std::size_t pi = 0; pi < sc.experiment.k_fraction_grid.size(); ++pi) {
        const double frac = sc.experiment.k_fraction_grid[pi];
        const int k = std::clamp(static_cast<int>(std::round(frac * n)), 1, n);
        const std::uint64_t pseed = point_seed(spec.master_seed, pi);
        const PilotMatrix phi = pilot_for(sc, m, pseed);
        auto trial = [&](int, std::uint64_t tseed) {
            Rng rng = make_rng(tseed);
            const CascadedChannel ch = cascaded_channel(sc, ws, mix64(tseed));
            const auto y = simulate_pilot_rx(phi, ch.g, sc.pilot.pilot_power, sigma_sq, rng);
            const EstimationResult est = run_ls(phi, y, sc.pilot.pilot_power);
            const CompressedFeedback fb = cs_compress(est.g_hat, k, bits);
            return nmse(cs_reconstruct(fb), ch.g);
        };
        const Moments mo = reduce(run_trials(spec.trials, spec.threads, pseed, trial));
        const int index_width = n > 1 ? static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) : 1;
        const double payload = 2.0 * k * bits + static_cast<double>(k) * index_width;
        PointRecord rec;
        rec.coords = {{"k_over_n", static_cast<double>(k) / n}};
        rec.values = {{"payload_bits", payload},
                      {"mean_nmse", mo.mean},
                      {"stderr", mo.std_error}};
        rec.trials = spec.trials;
        rec.seed = pseed;
        out.points.push_back(std::move(rec));
    }
}

void sweep_pixel_maps(const ExperimentSpec& spec, const Scenario& sc, SweepResult& out) {
    const PixelOpticsSpec optics = sc.optics_spec(true);
    const JitterSpec jitter = sc.jitter.tr();
    const int pts = std::max(3, sc.experiment.map_points);
    const double half = sc.experiment.map_halfwidth_mu;
    std::size_t pi = 0;
    for (int iy = 0; iy < pts; ++iy) {
        for (int ix = 0; ix < pts; ++ix) {
            const Vec2 mu{-half + 2.0 * half * ix / (pts - 1), -half + 2.0 * half * iy / (pts - 1)};
            PixelOpticsSpec unit = optics;
            unit.strehl = unit.obliquity = 1.0;
            const double ideal = ideal_pixel_gain(mu, unit);
            const double blurred = long_exposure_gain(mu, unit, jitter, sc.optics.quadrature);
            PointRecord rec;
            rec.coords = {{"mu_x", mu.x}, {"mu_y", mu.y}};
            rec.values = {{"ideal_gain", ideal},
                          {"long_exposure_gain", blurred},
                          {"deviation", ideal - blurred}};
            rec.trials = 1;
            rec.seed = point_seed(spec.master_seed, pi++);
            out.points.push_back(std::move(rec));
        }
    }
}

} // namespace

ExperimentKind experiment_from_name(const std::string& name) {
    if (name == "nmse_vs_M" || name == "nmse_vs_m") return ExperimentKind::nmse_vs_m;
    if (name == "nmse_vs_snr") return ExperimentKind::nmse_vs_snr;
    if (name == "effsnr_vs_nmse") return ExperimentKind::effsnr_vs_nmse;
    if (name == "pilot_vs_wavelength") return ExperimentKind::pilot_vs_wavelength;
    if (name == "pilot_vs_area") return ExperimentKind::pilot_vs_area;
    if (name == "complexity") return ExperimentKind::complexity;
    if (name == "cs_feedback") return ExperimentKind::cs_feedback;
    if (name == "pixel_gain_maps") return ExperimentKind::pixel_gain_maps;
    throw ConfigError("unknown experiment '" + name + "'");
}

std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::nmse_vs_m: return "nmse_vs_M";
        case ExperimentKind::nmse_vs_snr: return "nmse_vs_snr";
        case ExperimentKind::effsnr_vs_nmse: return "effsnr_vs_nmse";
        case ExperimentKind::pilot_vs_wavelength: return "pilot_vs_wavelength";
        case ExperimentKind::pilot_vs_area: return "pilot_vs_area";
        case ExperimentKind::complexity: return "complexity";
        case ExperimentKind::cs_feedback: return "cs_feedback";
        case ExperimentKind::pixel_gain_maps: return "pixel_gain_maps";
    }
    return "unknown";
}

ExperimentSpec ExperimentSpec::from_scenario(ExperimentKind kind, const Scenario& sc) {
    ExperimentSpec spec;
    spec.kind = kind;
    spec.trials = sc.experiment.trials;
    spec.master_seed = sc.experiment.master_seed;
    spec.threads = sc.experiment.threads;
    return spec;
}

double calibrated_noise_variance(const Scenario& sc, const ChannelWorkspace& ws,
                                 double gamma_linear) {
    if (!(gamma_linear > 0.0)) throw ConfigError("gamma_pilot must be > 0");
    return sc.pilot.pilot_power * ws.sum_mean_power / gamma_linear;
}

SweepResult run_experiment(const ExperimentSpec& spec, const Scenario& sc) {
    sc.validate();
    if (spec.trials < 1) throw ConfigError("experiment: trials must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    SweepResult out;
    out.experiment = experiment_name(spec.kind);
    out.master_seed = spec.master_seed;
    out.scenario_fingerprint = scenario_hash(sc);
    switch (spec.kind) {
        case ExperimentKind::nmse_vs_m: sweep_nmse_vs_m(spec, sc, out); break;
        case ExperimentKind::nmse_vs_snr: sweep_nmse_vs_snr(spec, sc, out); break;
        case ExperimentKind::effsnr_vs_nmse: sweep_effsnr(spec, sc, out); break;
        case ExperimentKind::pilot_vs_wavelength: sweep_pilot_bound(spec, sc, out, true); break;
        case ExperimentKind::pilot_vs_area: sweep_pilot_bound(spec, sc, out, false); break;
        case ExperimentKind::complexity: sweep_complexity(spec, sc, out); break;
        case ExperimentKind::cs_feedback: sweep_cs_feedback(spec, sc, out); break;
        case ExperimentKind::pixel_gain_maps: sweep_pixel_maps(spec, sc, out); break;
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

BaselineReport run_baselines(const Scenario& sc, int trials, std::uint64_t seed) {
    sc.validate();
    const ChannelWorkspace ws = build_channel_workspace(sc);
    const double gamma = db_to_linear(sc.pilot.gamma_pilot_db);
    const double sigma_sq = calibrated_noise_variance(sc, ws, gamma);
    const int n = sc.pixel_count();
    const int m = sc.pilot.length;
    const PilotMatrix phi = pilot_for(sc, m, seed);

    double sum_real = 0.0, sum_ideal = 0.0, sum_cap_gap = 0.0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t tseed = trial_seed(seed, t);
        Rng rng = make_rng(tseed);
        const CascadedChannel ch = cascaded_channel(sc, ws, mix64(tseed));
        const auto y = simulate_pilot_rx(phi, ch.g, sc.pilot.pilot_power, sigma_sq, rng);
        const EstimationResult est = run_ls(phi, y, sc.pilot.pilot_power);
        const ControlState st = adapt_phases(est.g_hat, sc.control.adapt);
        const double achieved = std::norm(combined_amplitude(ch.g, st.weights));
        const double ideal = kernels::sum_abs(ch.g.data(), n);
        const double snr_real = sc.link.data_power * achieved / sigma_sq;
        const double snr_ideal = sc.link.data_power * ideal * ideal / sigma_sq;
        sum_real += snr_real;
        sum_ideal += snr_ideal;
        sum_cap_gap += std::log2(1.0 + snr_ideal) - std::log2(1.0 + snr_real);
    }
    BaselineReport rep;
    rep.realistic_snr_db = linear_to_db(sum_real / trials);
    rep.perfect_csi_snr_db = linear_to_db(sum_ideal / trials);
    rep.gap_quantized_db = rep.perfect_csi_snr_db - rep.realistic_snr_db;
    rep.capacity_gap_bits = sum_cap_gap / trials;

    Scenario ideal_sc = sc;
    ideal_sc.jitter = JitterSection{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    ideal_sc.optics.strehl_tr = ideal_sc.optics.strehl_rr = 1.0;
    const ChannelWorkspace ws0 = build_channel_workspace(ideal_sc);
    rep.jitter_budget_db = linear_to_db(ws.sum_mean_power);
    rep.zero_jitter_budget_db = linear_to_db(ws0.sum_mean_power);
    rep.jitter_loss_db = rep.zero_jitter_budget_db - rep.jitter_budget_db;

    // Boresight pixel: the one closest to the receiver axis.
    int bore = 0;
    double best = 1e300;
    for (int i = 0; i < n; ++i) {
        const Vec2 mu = ws.hops.mu_rr[i];
        const double off = mu.x * mu.x + mu.y * mu.y;
        if (off < best) {
            best = off;
            bore = i;
        }
    }
    rep.boresight_signal_power_w = ws.mean_power[bore] * sc.link.data_power;
    return rep;
}

void write_csv(const SweepResult& result, std::ostream& os) {
    if (result.points.empty()) return;
    const PointRecord& first = result.points.front();
    bool comma = false;
    for (const auto& [name, _] : first.coords) {
        os << (comma ? "," : "") << name;
        comma = true;
    }
    for (const auto& [name, _] : first.values) os << "," << name;
    os << ",trials,seed\n";
    os.precision(12);
    for (const PointRecord& p : result.points) {
        comma = false;
        for (const auto& [_, v] : p.coords) {
            os << (comma ? "," : "") << v;
            comma = true;
        }
        for (const auto& [_, v] : p.values) os << "," << v;
        os << "," << p.trials << "," << p.seed << "\n";
    }
}

void write_manifest(const SweepResult& result, const Scenario& sc, std::ostream& os) {
    nlohmann::json j;
    j["experiment"] = result.experiment;
    j["generator_version"] = "1.0.0";
    j["master_seed"] = result.master_seed;
    j["scenario_fnv1a"] = result.scenario_fingerprint;
    j["points"] = result.points.size();
    j["trials_per_point"] = result.points.empty() ? 0 : result.points.front().trials;
    j["wall_seconds"] = result.wall_seconds;
    j["kernel_isa"] = std::string(kernels::active_isa());
    j["notes"] = result.notes;
    j["effective_config"] = emit_scenario(sc);
    os << j.dump(2) << "\n";
}

} // namespace rislink
