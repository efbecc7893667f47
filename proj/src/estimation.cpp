#include "rislink/estimation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rislink/errors.hpp"
#include "rislink/kernels.hpp"

namespace rislink {

void PilotPlan::validate() const {
    if (n < 1) throw ConfigError("pilot: N must be >= 1");
    if (m < n) throw ConfigError("pilot: M must be >= N (identifiability)");
    if (!(pilot_power > 0.0)) throw ConfigError("pilot: pilot power must be > 0");
    if (noise_variance < 0.0) throw ConfigError("pilot: noise variance must be >= 0");
}

PilotMatrix make_pilot_matrix(const PilotPlan& plan, std::uint64_t seed) {
    plan.validate();
    PilotMatrix phi;
    phi.m = plan.m;
    phi.n = plan.n;
    phi.kind = plan.kind;
    phi.a.resize(static_cast<std::size_t>(plan.m) * plan.n);
    if (plan.kind == PilotKind::unitary_dft) {
        // First N columns of the M-point DFT; (m*k mod M) keeps the phase
        // argument small for precision.
        const double base = -2.0 * std::numbers::pi / plan.m;
        for (int k = 0; k < plan.n; ++k) {
            cplx* col = phi.a.data() + static_cast<std::size_t>(k) * plan.m;
            for (int r = 0; r < plan.m; ++r) {
                const long long idx = (static_cast<long long>(r) * k) % plan.m;
                col[r] = std::polar(1.0, base * static_cast<double>(idx));
            }
        }
    } else {
        Rng rng = make_rng(seed);
        std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
        for (auto& e : phi.a) e = std::polar(1.0, u(rng));
    }
    return phi;
}

std::vector<cplx> simulate_pilot_rx(const PilotMatrix& phi, std::span<const cplx> g,
                                    double pilot_power, double noise_variance, Rng& rng) {
    if (static_cast<int>(g.size()) != phi.n)
        throw std::invalid_argument("simulate_pilot_rx: channel length does not match pilot columns");
    if (noise_variance < 0.0) throw std::invalid_argument("simulate_pilot_rx: negative noise variance");
    std::vector<cplx> y(phi.m, cplx{0.0, 0.0});
    const double amp = std::sqrt(pilot_power);
    for (int k = 0; k < phi.n; ++k)
        kernels::caxpy(amp * g[k], phi.col(k), y.data(), phi.m);
    if (noise_variance > 0.0)
        for (auto& v : y) v += circular_gaussian(rng, noise_variance);
    return y;
}

EstimationResult ls_estimate_unitary(const PilotMatrix& phi, std::span<const cplx> y,
                                     double pilot_power) {
    if (phi.kind != PilotKind::unitary_dft)
        throw std::invalid_argument("ls_estimate_unitary: pilot matrix is not the unitary kind");
    if (static_cast<int>(y.size()) != phi.m)
        throw std::invalid_argument("ls_estimate_unitary: observation length mismatch");
    EstimationResult r;
    r.method = "unitary";
    r.g_hat.resize(phi.n);
    const double scale = 1.0 / (phi.m * std::sqrt(pilot_power));
    for (int k = 0; k < phi.n; ++k)
        r.g_hat[k] = scale * kernels::cdotc(phi.col(k), y.data(), phi.m);
    r.op_count = static_cast<std::uint64_t>(phi.m) * phi.n;
    return r;
}

EstimationResult ls_estimate_general(const PilotMatrix& phi, std::span<const cplx> y,
                                     double pilot_power) {
    if (static_cast<int>(y.size()) != phi.m)
        throw std::invalid_argument("ls_estimate_general: observation length mismatch");
    const int m = phi.m, n = phi.n;
    EstimationResult r;
    r.method = "general";

    // Gram matrix Phi^H Phi (Hermitian; upper triangle computed) and rhs.
    Eigen::MatrixXcd gram(n, n);
    std::uint64_t macs = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const cplx v = kernels::cdotc(phi.col(i), phi.col(j), m);
            gram(i, j) = v;
            gram(j, i) = std::conj(v);
            macs += m;
        }
    }
    Eigen::VectorXcd rhs(n);
    for (int k = 0; k < n; ++k) {
        rhs(k) = kernels::cdotc(phi.col(k), y.data(), m);
        macs += m;
    }

    Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
    if (ldlt.info() != Eigen::Success)
        throw NumericalError("ls_estimate_general: Gram factorization failed", 0.0, 0.0);
    // Pivot-ratio condition estimate; LDLT::rcond() is unreliable when a
    // pivot is exactly zero.
    const Eigen::VectorXd d = ldlt.vectorD().real().cwiseAbs();
    const double cond_est = d.maxCoeff() > 0.0 ? d.minCoeff() / d.maxCoeff() : 0.0;
    if (!(cond_est > 1e-13))
        throw NumericalError("ls_estimate_general: Gram matrix numerically singular", 0.0,
                             cond_est);

    const Eigen::VectorXcd x = ldlt.solve(rhs) / std::sqrt(pilot_power);
    r.g_hat.assign(x.data(), x.data() + n);
    // Dense-solve cost model on top of the measured Gram/rhs MACs.
    const std::uint64_t nn = static_cast<std::uint64_t>(n);
    r.op_count = macs + (2 * nn * nn * nn) / 3 + 2 * nn * nn;
    return r;
}

double nmse(std::span<const cplx> g_hat, std::span<const cplx> g) {
    if (g_hat.size() != g.size()) throw std::invalid_argument("nmse: size mismatch");
    const double denom = kernels::sum_abs2(g.data(), g.size());
    if (denom <= 0.0) throw std::invalid_argument("nmse: zero channel, NMSE undefined");
    double num = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const cplx d = g_hat[i] - g[i];
        num += d.real() * d.real() + d.imag() * d.imag();
    }
    return num / denom;
}

double predicted_nmse(int n, int m, double gamma_pilot) {
    if (n < 1 || m < 1) throw std::invalid_argument("predicted_nmse: N and M must be >= 1");
    if (!(gamma_pilot > 0.0)) throw std::invalid_argument("predicted_nmse: gamma_pilot must be > 0");
    return static_cast<double>(n) / (static_cast<double>(m) * gamma_pilot);
}

FisherInfo fisher_information(const PilotMatrix& phi, double pilot_power, double noise_variance) {
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("fisher_information: noise variance must be > 0");
    const int n = phi.n;
    FisherInfo info;
    info.n = n;
    info.j.resize(static_cast<std::size_t>(n) * n);
    const double s = pilot_power / noise_variance;
    Eigen::MatrixXcd jm(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx v = s * kernels::cdotc(phi.col(i), phi.col(j), phi.m);
            jm(i, j) = v;
            info.j[static_cast<std::size_t>(j) * n + i] = v;
        }
    info.crlb_trace = jm.ldlt().solve(Eigen::MatrixXcd::Identity(n, n)).trace().real();
    return info;
}

int required_pilot_length(int n, double eps, double gamma_pilot) {
    if (n < 1) throw std::invalid_argument("required_pilot_length: N must be >= 1");
    if (!(eps > 0.0) || eps >= 1.0)
        throw std::invalid_argument("required_pilot_length: eps must be in (0, 1)");
    if (!(gamma_pilot > 0.0))
        throw std::invalid_argument("required_pilot_length: gamma_pilot must be > 0");
    const double raw = static_cast<double>(n) / (eps * gamma_pilot);
    const double ceiled = std::ceil(raw);
    return std::max(static_cast<double>(n), ceiled) >= 2147483647.0
               ? 2147483647
               : std::max(n, static_cast<int>(ceiled));
}

} // namespace rislink
