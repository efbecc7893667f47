#include "rislink/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "rislink/errors.hpp"
#include "rislink/kernels.hpp"

namespace rislink {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform midrise quantizer over [-scale, scale] with 2^bits levels.
double midrise(double v, double scale, int bits) {
    if (scale <= 0.0) return 0.0;
    const double levels = std::ldexp(1.0, bits); // 2^bits
    const double step = 2.0 * scale / levels;
    double idx = std::floor(v / step);
    idx = std::clamp(idx, -levels / 2.0, levels / 2.0 - 1.0);
    return (idx + 0.5) * step;
}

cplx quantize_component(cplx z, double scale, int bits) {
    return {midrise(z.real(), scale, bits), midrise(z.imag(), scale, bits)};
}

double max_component(std::span<const cplx> v) {
    double s = 0.0;
    for (const cplx& z : v) s = std::max({s, std::abs(z.real()), std::abs(z.imag())});
    return s;
}

// Orthonormal N-point DFT, column-major.
std::vector<cplx> dft_basis(int n) {
    std::vector<cplx> w(static_cast<std::size_t>(n) * n);
    const double base = -kTwoPi / n;
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        for (int r = 0; r < n; ++r)
            w[static_cast<std::size_t>(k) * n + r] =
                norm * std::polar(1.0, base * static_cast<double>((static_cast<long long>(r) * k) % n));
    return w;
}

} // namespace

double QuantizerSpec::step() const { return kTwoPi / std::ldexp(1.0, bits); }

std::vector<double> QuantizerSpec::codebook() const {
    const int levels = 1 << bits;
    std::vector<double> c(levels);
    for (int i = 0; i < levels; ++i) c[i] = i * step();
    return c;
}

double phase_quantize(double phi, int bits) {
    if (bits < 1) throw std::invalid_argument("phase_quantize: bits must be >= 1");
    if (!std::isfinite(phi)) throw std::invalid_argument("phase_quantize: non-finite phase");
    const double step = kTwoPi / std::ldexp(1.0, bits);
    double wrapped = std::fmod(phi, kTwoPi);
    if (wrapped < 0.0) wrapped += kTwoPi;
    double q = step * std::round(wrapped / step);
    q = std::fmod(q, kTwoPi);
    if (q < 0.0) q += kTwoPi;
    return q;
}

QuantizedFeedback quantize_channel_feedback(const PilotObservation& obs, int component_bits,
                                            FeedbackMode mode) {
    if (component_bits < 1)
        throw std::invalid_argument("quantize_channel_feedback: Q must be >= 1");
    QuantizedFeedback fb;
    fb.mode = mode;
    fb.component_bits = component_bits;
    if (mode == FeedbackMode::processed) {
        if (obs.g_hat.empty()) throw std::invalid_argument("quantize_channel_feedback: empty estimate");
        fb.scale = max_component(obs.g_hat);
        fb.reconstructed.reserve(obs.g_hat.size());
        for (const cplx& z : obs.g_hat)
            fb.reconstructed.push_back(quantize_component(z, fb.scale, component_bits));
        fb.payload_bits = 2ULL * obs.g_hat.size() * component_bits;
    } else {
        if (obs.y.empty() || obs.pilot == nullptr)
            throw std::invalid_argument("quantize_channel_feedback: raw mode needs pilot observations");
        fb.scale = max_component(obs.y);
        std::vector<cplx> yq;
        yq.reserve(obs.y.size());
        for (const cplx& z : obs.y) yq.push_back(quantize_component(z, fb.scale, component_bits));
        fb.payload_bits = 2ULL * obs.y.size() * component_bits;
        // The transmitter re-runs the estimator on the quantized pilots.
        EstimationResult est = obs.pilot->kind == PilotKind::unitary_dft
                                   ? ls_estimate_unitary(*obs.pilot, yq, obs.pilot_power)
                                   : ls_estimate_general(*obs.pilot, yq, obs.pilot_power);
        fb.reconstructed = std::move(est.g_hat);
    }
    return fb;
}

CompressedFeedback cs_compress(std::span<const cplx> g_hat, int k, int coeff_bits) {
    const int n = static_cast<int>(g_hat.size());
    if (n == 0) throw std::invalid_argument("cs_compress: empty input");
    if (k < 1 || k > n) throw std::invalid_argument("cs_compress: K must be in [1, N]");
    if (coeff_bits < 1) throw std::invalid_argument("cs_compress: bits must be >= 1");

    const std::vector<cplx> w = dft_basis(n);
    std::vector<cplx> coeffs(n);
    for (int i = 0; i < n; ++i)
        coeffs[i] = kernels::cdotc(w.data() + static_cast<std::size_t>(i) * n, g_hat.data(), n);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::norm(coeffs[a]) > std::norm(coeffs[b]);
    });

    CompressedFeedback fb;
    fb.n = n;
    fb.k = k;
    fb.coeff_bits = coeff_bits;
    fb.kept_indices.assign(order.begin(), order.begin() + k);
    std::sort(fb.kept_indices.begin(), fb.kept_indices.end());

    double scale = 0.0;
    for (int idx : fb.kept_indices)
        scale = std::max({scale, std::abs(coeffs[idx].real()), std::abs(coeffs[idx].imag())});
    fb.scale = scale;
    fb.coefficients.reserve(k);
    for (int idx : fb.kept_indices)
        fb.coefficients.push_back(quantize_component(coeffs[idx], scale, coeff_bits));

    fb.payload_bits = 2ULL * k * coeff_bits;
    const int index_width = n > 1 ? static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) : 1;
    fb.index_bits = static_cast<std::uint64_t>(k) * index_width;
    return fb;
}

std::vector<cplx> cs_reconstruct(const CompressedFeedback& fb) {
    if (fb.kept_indices.size() != fb.coefficients.size())
        throw std::invalid_argument("cs_reconstruct: inconsistent payload");
    const std::vector<cplx> w = dft_basis(fb.n);
    std::vector<cplx> out(fb.n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < fb.kept_indices.size(); ++i) {
        const int idx = fb.kept_indices[i];
        if (idx < 0 || idx >= fb.n) throw std::invalid_argument("cs_reconstruct: index out of range");
        kernels::caxpy(fb.coefficients[i], w.data() + static_cast<std::size_t>(idx) * fb.n, out.data(),
                       fb.n);
    }
    return out;
}

void FeedbackBudget::validate() const {
    if (!(spectral_efficiency > 0.0) || !(feedback_bandwidth > 0.0) || !(frame_duration > 0.0) ||
        !(symbol_rate > 0.0))
        throw ConfigError("budget: beta, B_FB, T and R_s must be > 0");
    if (min_data_duty < 0.0 || min_data_duty >= 1.0)
        throw ConfigError("budget: min_data_duty must be in [0, 1)");
}

double feedback_time_fraction(const FeedbackBudget& budget, double payload_bits) {
    budget.validate();
    if (payload_bits < 0.0) throw std::invalid_argument("feedback_time_fraction: negative payload");
    return payload_bits / (budget.spectral_efficiency * budget.feedback_bandwidth * budget.frame_duration);
}

OverheadReport overhead_feasible(int m, const FeedbackBudget& budget, double payload_bits) {
    budget.validate();
    if (m < 1) throw std::invalid_argument("overhead_feasible: M must be >= 1");
    OverheadReport rep;
    rep.tau_pilot = m / (budget.symbol_rate * budget.frame_duration);
    rep.tau_fb = feedback_time_fraction(budget, payload_bits);
    const double limit = 1.0 - budget.min_data_duty;
    rep.slack = limit - rep.tau_pilot - rep.tau_fb;
    rep.feasible = rep.tau_pilot + rep.tau_fb <= limit;
    return rep;
}

int max_quantization_depth(int n, const FeedbackBudget& budget, double eps, double gamma_pilot) {
    budget.validate();
    const int m_req = required_pilot_length(n, eps, gamma_pilot);
    const double bracket = (1.0 - budget.min_data_duty) * budget.frame_duration -
                           static_cast<double>(m_req) / budget.symbol_rate;
    if (bracket <= 0.0) return 0;
    const double q = budget.spectral_efficiency * budget.feedback_bandwidth / (2.0 * n) * bracket;
    return q <= 0.0 ? 0 : static_cast<int>(std::floor(q));
}

} // namespace rislink
