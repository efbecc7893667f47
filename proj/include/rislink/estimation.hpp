#pragma once
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rislink/rng.hpp"

namespace rislink {

using cplx = std::complex<double>;

enum class PilotKind { unitary_dft, general };

struct PilotPlan {
    int m{};               // pilot length (symbols)
    int n{};               // element count
    PilotKind kind{PilotKind::unitary_dft};
    double pilot_power{1.0};     // P_T (W)
    double noise_variance{0.0};  // sigma^2 (A^2)
    void validate() const;       // M >= N etc.
};

/// M x N pilot matrix, column-major, unit-modulus entries. The unitary
/// kind takes the first N columns of the M-point DFT so that
/// Phi^H Phi = M I_N holds to machine precision.
struct PilotMatrix {
    int m{}, n{};
    PilotKind kind{PilotKind::unitary_dft};
    std::vector<cplx> a;
    const cplx* col(int j) const { return a.data() + static_cast<std::size_t>(j) * m; }
};

PilotMatrix make_pilot_matrix(const PilotPlan& plan, std::uint64_t seed = 0);

/// y = sqrt(P_T) Phi g + n, n ~ CN(0, sigma^2 I).
std::vector<cplx> simulate_pilot_rx(const PilotMatrix& phi, std::span<const cplx> g,
                                    double pilot_power, double noise_variance, Rng& rng);

struct EstimationResult {
    std::vector<cplx> g_hat;
    double nmse{std::numeric_limits<double>::quiet_NaN()}; // filled by the harness when g is known
    std::uint64_t op_count{}; // complex multiply-accumulates
    std::string method;
};

/// Inversion-free fast path g_hat = Phi^H y / (M sqrt(P_T)); requires a
/// unitary pilot matrix. op_count = M*N.
EstimationResult ls_estimate_unitary(const PilotMatrix& phi, std::span<const cplx> y,
                                     double pilot_power);

/// Normal-equations path (Phi^H Phi)^{-1} Phi^H y / sqrt(P_T); op_count adds
/// the Gram formation and the (2/3)N^3 + 2N^2 factorization/solve model.
/// Throws NumericalError with a condition estimate when the Gram matrix is
/// numerically singular.
EstimationResult ls_estimate_general(const PilotMatrix& phi, std::span<const cplx> y,
                                     double pilot_power);

/// ||g_hat - g||^2 / ||g||^2; throws on a zero channel.
double nmse(std::span<const cplx> g_hat, std::span<const cplx> g);

/// N / (M gamma_pilot).
double predicted_nmse(int n, int m, double gamma_pilot);

struct FisherInfo {
    int n{};
    std::vector<cplx> j;  // N x N column-major, (P_T/sigma^2) Phi^H Phi
    double crlb_trace{};  // tr[J^{-1}]
};
FisherInfo fisher_information(const PilotMatrix& phi, double pilot_power, double noise_variance);

/// M = max(N, ceil(N / (eps * gamma_pilot))) — the structural floor M >= N
/// is always enforced.
int required_pilot_length(int n, double eps, double gamma_pilot);

} // namespace rislink
