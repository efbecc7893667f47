#include "rislink/phase_control.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rislink/errors.hpp"
#include "rislink/feedback.hpp"
#include "rislink/kernels.hpp"

namespace rislink {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}
} // namespace

void AdaptConfig::validate() const {
    if (bits < 0) throw ConfigError("control: bits must be >= 0 (0 = continuous)");
    if (max_iterations < 1) throw ConfigError("control: max_iterations must be >= 1");
    if (!(step_scale > 0.0) || step_scale >= 2.0)
        throw ConfigError("control: step_scale must lie in (0, 2) for stable ascent");
    if (!(tolerance >= 0.0)) throw ConfigError("control: tolerance must be >= 0");
}

cplx combined_amplitude(std::span<const cplx> g, std::span<const cplx> theta) {
    if (g.size() != theta.size()) throw std::invalid_argument("combined_amplitude: size mismatch");
    return kernels::cdotc(g.data(), theta.data(), g.size());
}

std::vector<double> optimal_phases(std::span<const cplx> g_hat) {
    std::vector<double> phases(g_hat.size(), 0.0);
    for (std::size_t i = 0; i < g_hat.size(); ++i)
        if (g_hat[i] != cplx{0.0, 0.0}) phases[i] = wrap_2pi(std::arg(g_hat[i]));
    return phases;
}

ControlState adapt_phases(std::span<const cplx> g_hat, const AdaptConfig& cfg) {
    cfg.validate();
    const std::size_t n = g_hat.size();
    ControlState st;
    st.phases = optimal_phases(g_hat); // Algorithm initialization: phi_n = arg(g_hat_n)
    if (cfg.bits > 0 && cfg.quantize_each_iteration)
        for (double& p : st.phases) p = phase_quantize(p, cfg.bits);
    st.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) st.weights[i] = std::polar(1.0, st.phases[i]);

    const double norm_sq = kernels::sum_abs2(g_hat.data(), n);
    const double upper = kernels::sum_abs(g_hat.data(), n); // global optimum value
    if (norm_sq == 0.0) {
        st.objective_trace.push_back(0.0);
        st.converged = true;
        return st;
    }
    const double mu0 = cfg.step_scale / norm_sq;

    cplx s = combined_amplitude(g_hat, st.weights);
    double objective = std::abs(s);
    st.objective_trace.push_back(objective);

    std::vector<double> best_phases = st.phases;
    double best_objective = objective;

    for (int t = 0; t < cfg.max_iterations; ++t) {
        const double mu = cfg.step == AdaptConfig::Step::diminishing ? mu0 / (1.0 + t) : mu0;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx z = std::conj(g_hat[i]) * std::polar(1.0, st.phases[i]) * s;
            double phi = st.phases[i] - mu * z.imag();
            phi = wrap_2pi(phi);
            st.phases[i] = (cfg.bits > 0 && cfg.quantize_each_iteration)
                               ? phase_quantize(phi, cfg.bits)
                               : phi;
            st.weights[i] = std::polar(1.0, st.phases[i]);
        }
        s = combined_amplitude(g_hat, st.weights);
        const double next = std::abs(s);
        st.objective_trace.push_back(next);
        st.iterations = t + 1;
        if (next > upper * (1.0 + 1e-9) + 1e-12)
            throw NumericalError("adapt_phases: objective exceeded its analytic optimum", next, upper);
        if (next > best_objective) {
            best_objective = next;
            best_phases = st.phases;
        }
        if (next - objective < cfg.tolerance) {
            st.converged = true;
            break;
        }
        objective = next;
    }

    // Non-convergence hands back the best state visited.
    st.phases = best_phases;
    for (std::size_t i = 0; i < n; ++i) st.weights[i] = std::polar(1.0, st.phases[i]);

    if (cfg.bits > 0 && !cfg.quantize_each_iteration) {
        // Emit-only variant: project the best phases once.
        for (std::size_t i = 0; i < n; ++i) {
            st.phases[i] = phase_quantize(st.phases[i], cfg.bits);
            st.weights[i] = std::polar(1.0, st.phases[i]);
        }
        st.objective_trace.push_back(std::abs(combined_amplitude(g_hat, st.weights)));
    }
    return st;
}

double effective_snr(double gamma_star, double eps_nmse) {
    if (eps_nmse < 0.0 || eps_nmse >= 1.0)
        throw std::invalid_argument("effective_snr: eps must be in [0, 1)");
    return gamma_star * (1.0 - eps_nmse);
}

CapacityLoss capacity_loss(double gamma_star, double eps_nmse) {
    if (!(gamma_star > 0.0)) throw std::invalid_argument("capacity_loss: gamma must be > 0");
    if (eps_nmse < 0.0 || eps_nmse >= 1.0)
        throw std::invalid_argument("capacity_loss: eps must be in [0, 1)");
    CapacityLoss cl;
    cl.bound = std::log2(1.0 + gamma_star) - std::log2(1.0 + gamma_star * (1.0 - eps_nmse));
    cl.first_order = gamma_star * eps_nmse / (std::numbers::ln2 * (1.0 + gamma_star));
    return cl;
}

} // namespace rislink
