#pragma once
#include <cstdint>
#include <vector>

#include "rislink/geometry.hpp"

namespace rislink {

/// Normalized spatial frequencies of a rectangular pixel aperture plus the
/// Strehl and obliquity corrections applied outside the diffraction term.
struct PixelOpticsSpec {
    double k_x{};            // pi * dx / lambda  (rad)
    double k_y{};            // pi * dy / lambda  (rad)
    double strehl{1.0};      // S in (0, 1]
    double obliquity{1.0};   // rho in (0, 1]

    static PixelOpticsSpec from_pixel(double pixel_width, double pixel_height, double wavelength,
                                      double strehl = 1.0, double obliquity = 1.0);
    void validate() const;
};

/// Zero-mean Gaussian angular jitter, one covariance per hop:
///   [ sxx  sxy ]
///   [ sxy  syy ]   (rad^2)
struct JitterSpec {
    double sxx{0.0}, sxy{0.0}, syy{0.0};

    static JitterSpec isotropic(double sigma_rad);
    static JitterSpec anisotropic(double sigma_x_rad, double sigma_y_rad, double corr = 0.0);
    bool is_zero() const { return sxx == 0.0 && sxy == 0.0 && syy == 0.0; }
    bool is_diagonal() const { return sxy == 0.0; }
    double rms() const; // sqrt((sxx + syy)/2)
    /// Small-angle validity: RMS jitter above 5 mrad is allowed but flagged.
    bool exceeds_small_angle() const;
    void validate() const; // PSD check
};

struct QuadratureSpec {
    enum class Method { fixed, doubling };
    int nodes_per_axis{32};
    double relative_tolerance{1e-8};
    Method method{Method::doubling};
    int max_nodes_per_axis{8192};
    void validate() const;
};

/// sin(u)/u with a series branch near zero.
double sinc(double u);

/// Ideal Fraunhofer intensity gain sinc^2(kx mux) sinc^2(ky muy); excludes
/// the Strehl and obliquity factors.
double ideal_pixel_gain(Vec2 mu, const PixelOpticsSpec& spec);

/// Jitter-averaged (long-exposure) pixel gain:
///   (S rho / 4 kx ky) *
///   int over [-2kx,2kx]x[-2ky,2ky] of tri(wx) tri(wy) exp(-w'Sw/2) cos(w'mu) dw.
/// Exact when the jitter is zero; a diagonal covariance dispatches to the
/// product of 1-D blur kernels, a correlated one to the folded 2-D
/// Gauss-Legendre rule. Result clamped to [0, S rho]; throws NumericalError
/// when the requested tolerance cannot be reached.
double long_exposure_gain(Vec2 mu, const PixelOpticsSpec& spec, const JitterSpec& jitter,
                          const QuadratureSpec& quad);

/// The folded 2-D tensor rule regardless of covariance structure (exposed
/// for cross-testing against the separable path).
double long_exposure_gain_quad2d(Vec2 mu, const PixelOpticsSpec& spec, const JitterSpec& jitter,
                                 const QuadratureSpec& quad);

/// Diagnostics variant: raw quadrature value before clamping, the clamp
/// flag for tiny negatives, the refinement error estimate and the node
/// count the rule settled on (0 when the zero-jitter exact path was taken).
struct GainEvaluation {
    double value{};
    bool clamped_negative{};
    double refinement_error{};
    int nodes_per_axis{};
};
GainEvaluation long_exposure_gain_detailed(Vec2 mu, const PixelOpticsSpec& spec,
                                           const JitterSpec& jitter, const QuadratureSpec& quad);

/// Monte Carlo oracle: sample mean of S rho sinc^2(kx(mux+dx)) sinc^2(ky(muy+dy))
/// over jitter draws. Deterministic for a fixed seed.
struct McGain {
    double mean{};
    double std_error{};
};
McGain long_exposure_gain_mc(Vec2 mu, const PixelOpticsSpec& spec, const JitterSpec& jitter,
                             int trials, std::uint64_t seed);

/// 1-D blur kernel B(mu; k, sigma) = (1/2k) int_0^{2k} (1 - w/2k) e^{-s^2 w^2/2} 2 cos(w mu) dw.
/// For a diagonal covariance the 2-D gain factors as S rho B(mux) B(muy).
double blur_kernel_1d(double mu_axis, double k_axis, double sigma_axis, const QuadratureSpec& quad);

/// Product of the per-hop long-exposure gains.
double two_hop_gain(double gain_tr, double gain_rr);

/// Grid of Delta G = G0 - Gbar evaluated with S = rho = 1 for comparability.
std::vector<double> deviation_surface(const std::vector<Vec2>& mu_grid, const PixelOpticsSpec& spec,
                                      const JitterSpec& jitter, const QuadratureSpec& quad);

/// Isotropic jitter sigma achieving a target boresight attenuation
/// 1 - Gbar(0)/ (S rho) = target; bisection on the blur-kernel product.
double solve_sigma_for_boresight_attenuation(double target, const PixelOpticsSpec& spec,
                                             const QuadratureSpec& quad);

} // namespace rislink
