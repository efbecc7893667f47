#pragma once
#include "rislink/rng.hpp"

namespace rislink {

enum class TurbulenceRegime { none, lognormal, gammagamma };

/// Unit-mean scintillation model for one hop. Log-normal stores the
/// log-irradiance variance sigma^2_lnI (the log-amplitude form uses
/// sigma^2_chi = sigma^2_lnI / 4); Gamma-Gamma stores the two shape
/// parameters of the product-of-Gammas construction.
struct TurbulenceSpec {
    TurbulenceRegime regime{TurbulenceRegime::none};
    double sigma_ln_i_sq{0.0};
    double alpha_gg{4.0};
    double beta_gg{4.0};
    void validate() const;
};

/// One irradiance draw H > 0 with E[H] = 1.
double sample_irradiance(const TurbulenceSpec& spec, Rng& rng);

/// Closed-form E[sqrt(H)]: exp(-sigma^2_lnI/8) for log-normal,
/// Gamma(a+1/2)Gamma(b+1/2) / (Gamma(a)Gamma(b) sqrt(ab)) for Gamma-Gamma.
double mean_sqrt_irradiance(const TurbulenceSpec& spec);

/// E|g_n| = sqrt(E|g_n|^2) * E[sqrt(H_tr)] * E[sqrt(H_rr)].
double mean_abs_g(double baseline_power, const TurbulenceSpec& tr, const TurbulenceSpec& rr);

} // namespace rislink
