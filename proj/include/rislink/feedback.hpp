#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "rislink/estimation.hpp"

namespace rislink {

/// b-bit uniform phase codebook C_b = {0, 2pi/2^b, ..., (2^b-1) 2pi/2^b}.
struct QuantizerSpec {
    int bits{6};
    double step() const;
    std::vector<double> codebook() const;
};

/// Wrap to [0, 2pi), snap to the nearest of the 2^b grid points, reduce
/// mod 2pi. Idempotent; circular error at most step/2.
double phase_quantize(double phi, int bits);

enum class FeedbackMode { raw_pilots, processed };

/// Everything the receiver holds after the pilot phase; raw feedback
/// quantizes y, processed feedback quantizes the local estimate.
struct PilotObservation {
    const PilotMatrix* pilot{};
    std::vector<cplx> y;
    std::vector<cplx> g_hat;
    double pilot_power{1.0};
};

struct QuantizedFeedback {
    FeedbackMode mode{};
    int component_bits{};
    std::uint64_t payload_bits{};       // 2*N*Q processed, 2*M*Q raw
    double scale{};                     // per-vector quantizer scale (sent at full precision)
    std::vector<cplx> reconstructed;    // channel estimate recovered at the transmitter
};

/// Q-bit uniform midrise quantization of each real component, scaled to the
/// vector's largest component magnitude. Raw mode quantizes the M pilot
/// samples and re-runs LS at the transmitter; processed mode quantizes the
/// N-entry estimate directly.
QuantizedFeedback quantize_channel_feedback(const PilotObservation& obs, int component_bits,
                                            FeedbackMode mode);

/// Top-K transform-domain compressed feedback in an orthonormal DFT basis.
struct CompressedFeedback {
    int n{}, k{}, coeff_bits{};
    double scale{};
    std::vector<int> kept_indices;
    std::vector<cplx> coefficients;     // quantized values actually transmitted
    std::uint64_t payload_bits{};       // 2*K*bits (coefficient values)
    std::uint64_t index_bits{};         // K*ceil(log2 N) side information
};

CompressedFeedback cs_compress(std::span<const cplx> g_hat, int k, int coeff_bits);
std::vector<cplx> cs_reconstruct(const CompressedFeedback& fb);

struct FeedbackBudget {
    int component_bits{6};              // Q
    double spectral_efficiency{1.0};    // beta (bit/s/Hz)
    double feedback_bandwidth{1e6};     // B_FB (Hz)
    double frame_duration{10.0 * 1e-3};  // T (s)
    double symbol_rate{1e6};            // R_s (symbols/s)
    double min_data_duty{0.2};          // eta_min in [0, 1)
    void validate() const;
};

/// tau_FB = payload / (beta * B_FB * T).
double feedback_time_fraction(const FeedbackBudget& budget, double payload_bits);

struct OverheadReport {
    bool feasible{};
    double tau_pilot{};
    double tau_fb{};
    double slack{};
};

/// tau_pilot = M/(R_s T); feasible iff tau_pilot + tau_FB <= 1 - eta_min
/// (boundary inclusive).
OverheadReport overhead_feasible(int m, const FeedbackBudget& budget, double payload_bits);

/// Largest Q with the combined pilot+feedback overhead inside the duty
/// budget, with the pilot time taken from the realized pilot length
/// max(N, ceil(N/(eps*gamma))). Returns 0 when no feedback time remains.
int max_quantization_depth(int n, const FeedbackBudget& budget, double eps, double gamma_pilot);

} // namespace rislink
