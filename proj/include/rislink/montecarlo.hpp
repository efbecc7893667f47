#pragma once
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rislink/channel.hpp"

namespace rislink {

enum class ExperimentKind {
    nmse_vs_m,
    nmse_vs_snr,
    effsnr_vs_nmse,
    pilot_vs_wavelength,
    pilot_vs_area,
    complexity,
    cs_feedback,
    pixel_gain_maps,
};

ExperimentKind experiment_from_name(const std::string& name);
std::string experiment_name(ExperimentKind kind);

/// Sweep definition; grids default from the scenario's [experiment] section.
struct ExperimentSpec {
    ExperimentKind kind{ExperimentKind::nmse_vs_m};
    int trials{200};
    std::uint64_t master_seed{12345};
    int threads{1};
    static ExperimentSpec from_scenario(ExperimentKind kind, const Scenario& sc);
};

struct PointRecord {
    std::vector<std::pair<std::string, double>> coords;
    std::vector<std::pair<std::string, double>> values;
    int trials{};
    std::uint64_t seed{}; // per-point replay seed; trial t uses trial_seed(seed, t)
};

struct SweepResult {
    std::string experiment;
    std::vector<PointRecord> points;
    std::vector<std::string> notes; // recorded modeling caveats and discrepancies
    std::uint64_t master_seed{};
    std::uint64_t scenario_fingerprint{};
    double wall_seconds{};
};

/// Deterministic under (spec, scenario, master seed) regardless of the
/// worker count: trials are seeded per (point, trial) and reduced in index
/// order.
SweepResult run_experiment(const ExperimentSpec& spec, const Scenario& sc);

/// Idealized baselines: (i) perfect CSI + continuous phases, (ii) zero-jitter
/// diffraction-limited optics, compared against the realistic pipeline.
struct BaselineReport {
    double realistic_snr_db{};      // pilot/LS estimate + quantized phase control
    double perfect_csi_snr_db{};    // baseline (i)
    double gap_quantized_db{};      // (i) minus realistic
    double capacity_gap_bits{};     // capacity difference vs (i)
    double jitter_budget_db{};      // sum_n E|g_n|^2 with configured jitter
    double zero_jitter_budget_db{}; // same with Sigma = 0, S = 1
    double jitter_loss_db{};        // (ii) minus configured, >= 0 at boresight
    double boresight_signal_power_w{}; // boresight baseline power x P_d (shot-noise hint)
};
BaselineReport run_baselines(const Scenario& sc, int trials, std::uint64_t seed);

void write_csv(const SweepResult& result, std::ostream& os);
void write_manifest(const SweepResult& result, const Scenario& sc, std::ostream& os);

/// sigma^2 that realizes the design gamma_pilot on the deterministic
/// baseline: sigma^2 = P_T sum_n E|g_n|^2 / gamma.
double calibrated_noise_variance(const Scenario& sc, const ChannelWorkspace& ws, double gamma_linear);

} // namespace rislink
