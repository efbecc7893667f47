#include "rislink/pixel_optics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

#include "rislink/errors.hpp"
#include "rislink/rng.hpp"

namespace rislink {

namespace {

struct GlRule {
    std::vector<double> nodes;   // on [0, 1]
    std::vector<double> weights; // sum to 1
};

// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
// polynomial, mapped to [0, 1]. Rules are cached per order.
GlRule build_gl(int n) {
    GlRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = 0.5 * (1.0 - x); // mirror-symmetric pair
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

const GlRule& gauss_legendre(int n) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<GlRule>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_unique<GlRule>(build_gl(n))).first;
    return *it->second;
}

// The Gaussian factor confines the integrand to |w| <~ C/sigma; truncating
// the domain there keeps the nodes on the effective support (tail below
// exp(-C^2/2) ~ 1e-43 at C = 14) so large jitter converges quickly.
constexpr double kGaussSupport = 14.0;

double truncated_width(double full_width, double sigma_eff) {
    if (sigma_eff <= 0.0) return full_width;
    return std::min(full_width, kGaussSupport / sigma_eff);
}

// 1-D kernel integral at a fixed node count.
double blur_kernel_fixed(double mu, double k, double sigma, int n) {
    const GlRule& gl = gauss_legendre(n);
    const double width = 2.0 * k;
    const double upper = truncated_width(width, sigma);
    const double s2 = sigma * sigma;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = upper * gl.nodes[i];
        acc += gl.weights[i] * (1.0 - w / width) * std::exp(-0.5 * s2 * w * w) * 2.0 * std::cos(w * mu);
    }
    return acc * (upper / width); // times 1/(2k) normalization
}

// Folded 2-D tensor integral at a fixed node count per axis. The four
// quadrants combine into exp(q-+) terms whose exponents stay <= 0 for a PSD
// covariance, so nothing overflows.
double gain2d_fixed(Vec2 mu, const PixelOpticsSpec& spec, const JitterSpec& jit, int n) {
    const GlRule& gl = gauss_legendre(n);
    const double wx = 2.0 * spec.k_x, wy = 2.0 * spec.k_y;
    // Correlation weakens the per-axis Gaussian decay by (1 - |r|).
    const double denom = std::sqrt(jit.sxx * jit.syy);
    const double r = denom > 0.0 ? std::min(std::abs(jit.sxy) / denom, 1.0) : 0.0;
    const double decay = std::sqrt(std::max(1.0 - r, 1e-6));
    const double ux = truncated_width(wx, std::sqrt(jit.sxx) * decay);
    const double uy = truncated_width(wy, std::sqrt(jit.syy) * decay);
    std::vector<double> ox(n), tx(n), gx(n), cx(n), sx(n);
    std::vector<double> oy(n), ty(n), gy(n), cy(n), sy(n);
    for (int i = 0; i < n; ++i) {
        ox[i] = ux * gl.nodes[i];
        tx[i] = gl.weights[i] * (1.0 - ox[i] / wx);
        gx[i] = -0.5 * jit.sxx * ox[i] * ox[i];
        cx[i] = std::cos(ox[i] * mu.x);
        sx[i] = std::sin(ox[i] * mu.x);
        oy[i] = uy * gl.nodes[i];
        ty[i] = gl.weights[i] * (1.0 - oy[i] / wy);
        gy[i] = -0.5 * jit.syy * oy[i] * oy[i];
        cy[i] = std::cos(oy[i] * mu.y);
        sy[i] = std::sin(oy[i] * mu.y);
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double gxi = gx[i];
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            const double q = jit.sxy * ox[i] * oy[j];
            const double epp = std::exp(gxi + gy[j] - q); // (+,+)/(-,-) quadrants
            const double epm = std::exp(gxi + gy[j] + q); // (+,-)/(-,+) quadrants
            row += ty[j] * (epp * (cx[i] * cy[j] - sx[i] * sy[j]) +
                            epm * (cx[i] * cy[j] + sx[i] * sy[j]));
        }
        acc += tx[i] * row;
    }
    // Node-map Jacobian (ux*uy) over the 1/(4 kx ky) prefactor; the factor 2
    // counts the quadrant pairs folded into each exp term.
    return 2.0 * acc * (ux / wx) * (uy / wy);
}

struct Refined {
    double value{};
    double error{};
    int nodes{};
};

// Node-doubling refinement wrapper shared by the 1-D and 2-D paths.
template <typename Eval>
Refined refine_detailed(const QuadratureSpec& quad, Eval eval, const char* what) {
    quad.validate();
    int n = std::max(8, quad.nodes_per_axis);
    if (quad.method == QuadratureSpec::Method::fixed)
        return {eval(n), std::numeric_limits<double>::quiet_NaN(), n};
    double prev = eval(n);
    double last_diff = std::numeric_limits<double>::infinity();
    while (n * 2 <= quad.max_nodes_per_axis) {
        n *= 2;
        const double cur = eval(n);
        last_diff = std::abs(cur - prev);
        if (last_diff <= quad.relative_tolerance * std::max(std::abs(cur), 1e-14))
            return {cur, last_diff, n};
        prev = cur;
    }
    throw NumericalError(std::string(what) + ": quadrature did not reach the requested tolerance",
                         prev, last_diff);
}

template <typename Eval>
double refine(const QuadratureSpec& quad, Eval eval, const char* what) {
    return refine_detailed(quad, eval, what).value;
}

double clamp_gain(double value, double upper) {
    // Tiny negatives are quadrature noise around a true zero.
    if (value < 0.0) return 0.0;
    return std::min(value, upper);
}

} // namespace

PixelOpticsSpec PixelOpticsSpec::from_pixel(double pixel_width, double pixel_height,
                                            double wavelength, double strehl, double obliquity) {
    PixelOpticsSpec s;
    s.k_x = std::numbers::pi * pixel_width / wavelength;
    s.k_y = std::numbers::pi * pixel_height / wavelength;
    s.strehl = strehl;
    s.obliquity = obliquity;
    s.validate();
    return s;
}

void PixelOpticsSpec::validate() const {
    if (!(k_x > 0.0) || !(k_y > 0.0)) throw ConfigError("optics: k_x and k_y must be > 0");
    if (!(strehl > 0.0) || strehl > 1.0) throw ConfigError("optics: strehl must be in (0, 1]");
    if (!(obliquity > 0.0) || obliquity > 1.0) throw ConfigError("optics: obliquity must be in (0, 1]");
}

JitterSpec JitterSpec::isotropic(double sigma_rad) {
    return {sigma_rad * sigma_rad, 0.0, sigma_rad * sigma_rad};
}

JitterSpec JitterSpec::anisotropic(double sx, double sy, double corr) {
    return {sx * sx, corr * sx * sy, sy * sy};
}

double JitterSpec::rms() const { return std::sqrt(0.5 * (sxx + syy)); }

bool JitterSpec::exceeds_small_angle() const { return rms() > 5e-3; }

void JitterSpec::validate() const {
    if (sxx < 0.0 || syy < 0.0 || sxx * syy - sxy * sxy < -1e-30 * std::max(1.0, sxx * syy))
        throw ConfigError("jitter: covariance must be symmetric positive semidefinite");
}

void QuadratureSpec::validate() const {
    if (nodes_per_axis < 8) throw ConfigError("quadrature: nodes_per_axis must be >= 8");
    if (!(relative_tolerance > 0.0)) throw ConfigError("quadrature: relative_tolerance must be > 0");
}

double sinc(double u) {
    const double au = std::abs(u);
    if (au < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

double ideal_pixel_gain(Vec2 mu, const PixelOpticsSpec& spec) {
    spec.validate();
    const double sx = sinc(spec.k_x * mu.x);
    const double sy = sinc(spec.k_y * mu.y);
    return sx * sx * sy * sy;
}

double blur_kernel_1d(double mu_axis, double k_axis, double sigma_axis, const QuadratureSpec& quad) {
    if (sigma_axis < 0.0) throw ConfigError("blur_kernel_1d: sigma must be >= 0");
    if (sigma_axis == 0.0) {
        const double s = sinc(k_axis * mu_axis);
        return s * s;
    }
    const double v = refine(quad, [&](int n) { return blur_kernel_fixed(mu_axis, k_axis, sigma_axis, n); },
                            "blur_kernel_1d");
    return clamp_gain(v, 1.0);
}

double long_exposure_gain_quad2d(Vec2 mu, const PixelOpticsSpec& spec, const JitterSpec& jitter,
                                 const QuadratureSpec& quad) {
    spec.validate();
    jitter.validate();
    const double sr = spec.strehl * spec.obliquity;
    const double v = refine(quad, [&](int n) { return gain2d_fixed(mu, spec, jitter, n); },
                            "long_exposure_gain");
    return clamp_gain(sr * v, sr);
}

GainEvaluation long_exposure_gain_detailed(Vec2 mu, const PixelOpticsSpec& spec,
                                           const JitterSpec& jitter, const QuadratureSpec& quad) {
    spec.validate();
    jitter.validate();
    const double sr = spec.strehl * spec.obliquity;
    GainEvaluation out;
    if (jitter.is_zero()) {
        out.value = sr * ideal_pixel_gain(mu, spec);
        return out;
    }
    double raw;
    if (jitter.is_diagonal()) {
        const Refined bx = refine_detailed(
            quad, [&](int n) { return blur_kernel_fixed(mu.x, spec.k_x, std::sqrt(jitter.sxx), n); },
            "long_exposure_gain");
        const Refined by = refine_detailed(
            quad, [&](int n) { return blur_kernel_fixed(mu.y, spec.k_y, std::sqrt(jitter.syy), n); },
            "long_exposure_gain");
        raw = sr * bx.value * by.value;
        out.refinement_error =
            sr * (std::abs(bx.error * by.value) + std::abs(by.error * bx.value));
        out.nodes_per_axis = std::max(bx.nodes, by.nodes);
    } else {
        const Refined r = refine_detailed(
            quad, [&](int n) { return gain2d_fixed(mu, spec, jitter, n); }, "long_exposure_gain");
        raw = sr * r.value;
        out.refinement_error = sr * r.error;
        out.nodes_per_axis = r.nodes;
    }
    out.clamped_negative = raw < 0.0;
    out.value = clamp_gain(raw, sr);
    return out;
}

double long_exposure_gain(Vec2 mu, const PixelOpticsSpec& spec, const JitterSpec& jitter,
                          const QuadratureSpec& quad) {
    return long_exposure_gain_detailed(mu, spec, jitter, quad).value;
}

McGain long_exposure_gain_mc(Vec2 mu, const PixelOpticsSpec& spec, const JitterSpec& jitter,
                             int trials, std::uint64_t seed) {
    spec.validate();
    jitter.validate();
    if (trials < 1000) throw ConfigError("long_exposure_gain_mc: trials must be >= 1000");
    const double sr = spec.strehl * spec.obliquity;
    if (jitter.is_zero()) return {sr * ideal_pixel_gain(mu, spec), 0.0};

    // Cholesky factor of the 2x2 covariance (sxx = 0 forces sxy = 0 by PSD).
    const double l11 = std::sqrt(jitter.sxx);
    const double l21 = l11 > 0.0 ? jitter.sxy / l11 : 0.0;
    const double l22 = std::sqrt(std::max(0.0, jitter.syy - l21 * l21));

    Rng rng = make_rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    double sum = 0.0, sum2 = 0.0;
    for (int t = 0; t < trials; ++t) {
        const double z1 = nd(rng), z2 = nd(rng);
        const double dx = l11 * z1;
        const double dy = l21 * z1 + l22 * z2;
        const double sx = sinc(spec.k_x * (mu.x + dx));
        const double sy = sinc(spec.k_y * (mu.y + dy));
        const double v = sr * sx * sx * sy * sy;
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / trials;
    const double var = std::max(0.0, sum2 / trials - mean * mean);
    return {mean, std::sqrt(var / trials)};
}

double two_hop_gain(double gain_tr, double gain_rr) {
    if (gain_tr < 0.0 || gain_rr < 0.0) throw ConfigError("two_hop_gain: inputs must be >= 0");
    return gain_tr * gain_rr;
}

std::vector<double> deviation_surface(const std::vector<Vec2>& mu_grid, const PixelOpticsSpec& spec,
                                      const JitterSpec& jitter, const QuadratureSpec& quad) {
    PixelOpticsSpec unit = spec;
    unit.strehl = 1.0;
    unit.obliquity = 1.0;
    std::vector<double> out;
    out.reserve(mu_grid.size());
    for (const Vec2& mu : mu_grid)
        out.push_back(ideal_pixel_gain(mu, unit) - long_exposure_gain(mu, unit, jitter, quad));
    return out;
}

double solve_sigma_for_boresight_attenuation(double target, const PixelOpticsSpec& spec,
                                             const QuadratureSpec& quad) {
    if (!(target > 0.0) || target >= 1.0)
        throw ConfigError("attenuation target must be in (0, 1)");
    auto boresight = [&](double sigma) {
        return blur_kernel_1d(0.0, spec.k_x, sigma, quad) * blur_kernel_1d(0.0, spec.k_y, sigma, quad);
    };
    const double want = 1.0 - target;
    double lo = 0.0, hi = 1.0 / std::min(spec.k_x, spec.k_y);
    while (boresight(hi) > want) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (boresight(mid) > want) lo = mid;
        else hi = mid;
        if (hi - lo <= 1e-12 * hi) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace rislink
