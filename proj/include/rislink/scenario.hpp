#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "rislink/estimation.hpp"
#include "rislink/feedback.hpp"
#include "rislink/geometry.hpp"
#include "rislink/phase_control.hpp"
#include "rislink/pixel_optics.hpp"
#include "rislink/turbulence.hpp"

namespace rislink {

/// Static per-pixel optical efficiency; applied exactly once per pixel
/// (power domain), sqrt(eta) in the field domain.
struct OpticalEfficiencySpec {
    double reflectivity{0.875};
    double polarization_efficiency{1.0};
    double insertion_loss{0.8};
    double eta() const { return reflectivity * polarization_efficiency * insertion_loss; }
    void validate() const;
};

struct LinkSpec {
    double tx_directivity{1.0};  // G_T
    double rx_directivity{1.0};  // G_R
    double extinction{1e-4};     // alpha (1/m), Beer-Lambert power coefficient
    double data_power{1.0};      // P_d (W)
    bool complex_fading{false};  // per-element zeta ~ CN(0,1); excludes turbulence H
};

/// Shot + thermal receiver noise parameterization (current domain, A^2).
struct ReceiverNoiseSpec {
    double electron_charge{1.602176634e-19}; // q (C)
    double responsivity{0.8};                // R (A/W)
    double signal_power{1e-6};               // P_sig (W)
    double background_power{1e-7};           // P_bg (W)
    double dark_current{1e-9};               // I_dark (A)
    double bandwidth{1e9};                   // B (Hz)
    double boltzmann{1.380649e-23};          // k_B (J/K)
    double temperature{300.0};               // T (K)
    double feedback_resistance{1e4};         // R_F (ohm)
    double transconductance{0.03};           // g_m (S)
    double channel_noise_factor{1.5};        // Gamma
    double series_resistance{50.0};          // R_C (ohm)
    double input_capacitance{1e-11};         // C_T (F)
    double bit_rate{1e9};                    // R_b (1/s)
    double i2_factor{0.562};
    double i3_factor{0.0868};
    double if_factor{0.184};
    void validate() const;
};

/// [optics] section: per-hop Strehl/obliquity plus the quadrature policy.
struct OpticsSection {
    double strehl_tr{1.0}, strehl_rr{1.0};
    double obliquity_tr{1.0}, obliquity_rr{1.0};
    QuadratureSpec quadrature;
};

/// Per-hop RMS jitter in radians plus the x/y correlation; the covariance
/// matrices are derived so the fields stay order-independent when parsed.
struct JitterSection {
    double sigma_x_tr{0.2 * 1e-3}, sigma_y_tr{0.2 * 1e-3}, corr_tr{0.0};
    double sigma_x_rr{0.2 * 1e-3}, sigma_y_rr{0.2 * 1e-3}, corr_rr{0.0};
    JitterSpec tr() const { return JitterSpec::anisotropic(sigma_x_tr, sigma_y_tr, corr_tr); }
    JitterSpec rr() const { return JitterSpec::anisotropic(sigma_x_rr, sigma_y_rr, corr_rr); }
};

struct TurbulenceSection {
    TurbulenceSpec tr{TurbulenceRegime::lognormal, 0.1, 4.0, 4.0};
    TurbulenceSpec rr{TurbulenceRegime::lognormal, 0.1, 4.0, 4.0};
};

struct PilotSection {
    int length{128};
    bool auto_length{false};     // derive M from (N, target_nmse, gamma)
    PilotKind kind{PilotKind::unitary_dft};
    double pilot_power{1.0};     // P_T (W)
    double target_nmse{0.005};   // eps
    double gamma_pilot_db{20.0}; // design-point pilot SNR
};

struct BudgetSection {
    FeedbackBudget budget;
    bool auto_bits{false}; // derive Q from the overhead bound
};

struct ControlSection {
    AdaptConfig adapt{.bits = 6};
};

/// Sweep grids and sampling depth for the experiment harness.
struct ExperimentSection {
    int trials{200};
    std::uint64_t master_seed{12345};
    int threads{1};
    std::vector<double> m_grid{64, 128, 256};
    std::vector<double> gamma_db_grid{0, 10, 20};
    std::vector<double> epsilon_grid{0.001, 0.0064, 0.0119, 0.0173, 0.0228,
                                     0.0282, 0.0337, 0.0391, 0.0446, 0.05};
    std::vector<double> k_fraction_grid{0.25, 0.5, 0.75, 1.0};
    std::vector<double> n_grid{16, 32, 64, 128, 256, 512};
    std::vector<double> area_n_grid{16, 64, 144};  // pilot_vs_area needs square counts
    std::vector<double> lambda_nm_grid{850, 1064, 1310, 1550};
    std::vector<double> pixel_mm_grid{1, 2, 4};
    int cs_bits{16};
    int map_points{41};
    double map_halfwidth_mu{1.2e-3};
};

struct GeometrySection {
    Vec3 tx{0, 0, 0};
    double ris_plane_z{1000.0};
    Vec3 rx{0, 0, 2500.0};
    int grid_nx{8}, grid_ny{8};
    double lattice_pitch{20.0 * 1e-3};
    double pixel_width{2.0 * 1e-3};
    double pixel_height{2.0 * 1e-3};
    double wavelength{1550.0 * 1e-9};
};

/// Fully parsed and validated scenario: every module's parameter block.
struct Scenario {
    GeometrySection geometry;
    OpticsSection optics;
    JitterSection jitter;
    TurbulenceSection turbulence;
    OpticalEfficiencySpec efficiency;
    LinkSpec link;
    ReceiverNoiseSpec noise;
    PilotSection pilot;
    BudgetSection budget;
    ControlSection control;
    ExperimentSection experiment;

    // Optional per-pixel covariance overrides (programmatic only; the config
    // file carries the shared per-hop jitter). Empty = shared covariance.
    std::vector<JitterSpec> per_pixel_jitter_tr;
    std::vector<JitterSpec> per_pixel_jitter_rr;

    int pixel_count() const { return geometry.grid_nx * geometry.grid_ny; }
    ScenarioGeometry make_geometry() const;
    PixelOpticsSpec optics_spec(bool tr_hop) const;
    JitterSpec pixel_jitter(bool tr_hop, int n) const;
    void validate() const;
};

} // namespace rislink
