#include "rislink/turbulence.hpp"

#include <cmath>
#include <random>

#include "rislink/errors.hpp"

namespace rislink {

void TurbulenceSpec::validate() const {
    switch (regime) {
        case TurbulenceRegime::none:
            break;
        case TurbulenceRegime::lognormal:
            if (sigma_ln_i_sq < 0.0)
                throw ConfigError("turbulence: sigma_ln_i_sq must be >= 0");
            break;
        case TurbulenceRegime::gammagamma:
            if (!(alpha_gg > 0.0) || !(beta_gg > 0.0))
                throw ConfigError("turbulence: Gamma-Gamma shapes must be > 0");
            break;
    }
}

double sample_irradiance(const TurbulenceSpec& spec, Rng& rng) {
    spec.validate();
    switch (spec.regime) {
        case TurbulenceRegime::none:
            return 1.0;
        case TurbulenceRegime::lognormal: {
            if (spec.sigma_ln_i_sq == 0.0) return 1.0;
            std::normal_distribution<double> n(-0.5 * spec.sigma_ln_i_sq,
                                               std::sqrt(spec.sigma_ln_i_sq));
            return std::exp(n(rng));
        }
        case TurbulenceRegime::gammagamma: {
            // Product of independent unit-mean Gammas.
            std::gamma_distribution<double> ga(spec.alpha_gg, 1.0 / spec.alpha_gg);
            std::gamma_distribution<double> gb(spec.beta_gg, 1.0 / spec.beta_gg);
            return ga(rng) * gb(rng);
        }
    }
    return 1.0;
}

double mean_sqrt_irradiance(const TurbulenceSpec& spec) {
    spec.validate();
    switch (spec.regime) {
        case TurbulenceRegime::none:
            return 1.0;
        case TurbulenceRegime::lognormal:
            return std::exp(-spec.sigma_ln_i_sq / 8.0);
        case TurbulenceRegime::gammagamma: {
            const double a = spec.alpha_gg, b = spec.beta_gg;
            return std::exp(std::lgamma(a + 0.5) + std::lgamma(b + 0.5) - std::lgamma(a) -
                            std::lgamma(b)) /
                   std::sqrt(a * b);
        }
    }
    return 1.0;
}

double mean_abs_g(double baseline_power, const TurbulenceSpec& tr, const TurbulenceSpec& rr) {
    if (baseline_power < 0.0) throw ConfigError("mean_abs_g: baseline power must be >= 0");
    return std::sqrt(baseline_power) * mean_sqrt_irradiance(tr) * mean_sqrt_irradiance(rr);
}

} // namespace rislink
