#pragma once
#include <span>
#include <vector>

#include "rislink/estimation.hpp"

namespace rislink {

struct AdaptConfig {
    int bits{0};                 // 0 => continuous phases (b = infinity)
    int max_iterations{200};
    enum class Step { constant, diminishing } step{Step::constant};
    double step_scale{1.0};      // mu_t = step_scale / ||g_hat||^2, must stay in (0, 2)
    double tolerance{1e-9};      // stop when the objective improves by less
    bool quantize_each_iteration{true}; // false: project onto the codebook only at emission
    void validate() const;
};

struct ControlState {
    std::vector<double> phases;          // in [0, 2pi)
    std::vector<cplx> weights;           // e^{j phi}
    std::vector<double> objective_trace; // |g_hat^H theta| per iteration (incl. start)
    int iterations{};
    bool converged{};
};

/// Coherent sum g^H theta.
cplx combined_amplitude(std::span<const cplx> g, std::span<const cplx> theta);

/// Phases maximizing |g_hat^H theta|: phi*_n = arg(g_hat_n) wrapped to
/// [0, 2pi), so |g_hat^H theta*| = sum |g_hat_n|. Zero entries get phase 0.
/// (The optical phase physically applied at the surface is the negative of
/// phi; every reported quantity is a magnitude, so the sign convention is
/// internal.)
std::vector<double> optimal_phases(std::span<const cplx> g_hat);

/// Quantized stochastic-gradient phase adaptation: starting from
/// phi_n = arg(g_hat_n), iterate
///   phi_n <- Q_b( wrap( phi_n - mu_t Im{ conj(g_hat_n) e^{j phi_n} s } ) ),
/// s = g_hat^H theta, until the objective improvement drops below the
/// tolerance or the iteration cap is hit. Returns the full trace.
ControlState adapt_phases(std::span<const cplx> g_hat, const AdaptConfig& cfg);

/// gamma_eff = gamma_star (1 - eps).
double effective_snr(double gamma_star, double eps_nmse);

struct CapacityLoss {
    double bound{};       // log2(1+g) - log2(1+g(1-eps))
    double first_order{}; // g eps / (ln2 (1+g))
};
CapacityLoss capacity_loss(double gamma_star, double eps_nmse);

} // namespace rislink
