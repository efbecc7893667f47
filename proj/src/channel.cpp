#include "rislink/channel.hpp"

#include <cmath>
#include <numbers>

#include "rislink/errors.hpp"
#include "rislink/kernels.hpp"

namespace rislink {

void OpticalEfficiencySpec::validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!in_unit(reflectivity) || !in_unit(polarization_efficiency) || !in_unit(insertion_loss))
        throw ConfigError("efficiency: reflectivity, polarization and insertion loss must be in (0, 1]");
}

void ReceiverNoiseSpec::validate() const {
    const double positive[] = {electron_charge, responsivity,  bandwidth,        boltzmann,
                               temperature,     feedback_resistance, transconductance, series_resistance,
                               input_capacitance, bit_rate};
    for (double v : positive)
        if (!(v > 0.0)) throw ConfigError("noise: physical constants and front-end parameters must be > 0");
    if (signal_power < 0.0 || background_power < 0.0 || dark_current < 0.0)
        throw ConfigError("noise: optical powers and dark current must be >= 0");
    if (channel_noise_factor < 0.0 || i2_factor < 0.0 || i3_factor < 0.0 || if_factor < 0.0)
        throw ConfigError("noise: noise-bandwidth factors must be >= 0");
}

ScenarioGeometry Scenario::make_geometry() const {
    ScenarioGeometry g;
    g.tx = geometry.tx;
    g.ris_plane_z = geometry.ris_plane_z;
    g.rx = geometry.rx;
    g.lattice_pitch = geometry.lattice_pitch;
    g.pixel_width = geometry.pixel_width;
    g.pixel_height = geometry.pixel_height;
    g.wavelength = geometry.wavelength;
    g.pixel_centers = square_grid_centers(geometry.grid_nx, geometry.grid_ny, geometry.lattice_pitch);
    return g;
}

PixelOpticsSpec Scenario::optics_spec(bool tr_hop) const {
    return PixelOpticsSpec::from_pixel(geometry.pixel_width, geometry.pixel_height,
                                       geometry.wavelength,
                                       tr_hop ? optics.strehl_tr : optics.strehl_rr,
                                       tr_hop ? optics.obliquity_tr : optics.obliquity_rr);
}

JitterSpec Scenario::pixel_jitter(bool tr_hop, int n) const {
    const auto& overrides = tr_hop ? per_pixel_jitter_tr : per_pixel_jitter_rr;
    if (!overrides.empty()) return overrides.at(static_cast<std::size_t>(n));
    return tr_hop ? jitter.tr() : jitter.rr();
}

void Scenario::validate() const {
    rislink::validate(make_geometry());
    optics_spec(true);
    optics_spec(false);
    optics.quadrature.validate();
    jitter.tr().validate();
    jitter.rr().validate();
    for (const auto* overrides : {&per_pixel_jitter_tr, &per_pixel_jitter_rr}) {
        if (!overrides->empty() && static_cast<int>(overrides->size()) != pixel_count())
            throw ConfigError("jitter: per-pixel override must cover every pixel");
        for (const JitterSpec& j : *overrides) j.validate();
    }
    turbulence.tr.validate();
    turbulence.rr.validate();
    efficiency.validate();
    noise.validate();
    budget.budget.validate();
    control.adapt.validate();
    if (!(link.tx_directivity > 0.0) || !(link.rx_directivity > 0.0))
        throw ConfigError("link: directivities must be > 0");
    if (link.extinction < 0.0) throw ConfigError("link: extinction must be >= 0");
    if (!(link.data_power > 0.0)) throw ConfigError("link: data power must be > 0");
    if (!(pilot.pilot_power > 0.0)) throw ConfigError("pilot: pilot power must be > 0");
    if (!(pilot.target_nmse > 0.0) || pilot.target_nmse >= 1.0)
        throw ConfigError("pilot: target_nmse must be in (0, 1)");
    if (!pilot.auto_length && pilot.length < pixel_count())
        throw ConfigError("pilot: length must be >= N (or auto)");
    if (link.complex_fading && (turbulence.tr.regime != TurbulenceRegime::none ||
                                turbulence.rr.regime != TurbulenceRegime::none))
        throw ConfigError("link: complex_fading excludes turbulence irradiance factors");
    if (experiment.trials < 1) throw ConfigError("experiment: trials must be >= 1");
}

NoiseBreakdown noise_variance(const ReceiverNoiseSpec& s) {
    s.validate();
    NoiseBreakdown nb;
    const double i_sig = s.responsivity * s.signal_power;
    const double i_bg = s.responsivity * s.background_power;
    nb.shot = 2.0 * s.electron_charge * (i_sig + i_bg + s.dark_current) * s.bandwidth;
    const double kbt = s.boltzmann * s.temperature;
    const double rb = s.bit_rate;
    const double ct2 = s.input_capacitance * s.input_capacitance;
    nb.thermal =
        4.0 * kbt / s.feedback_resistance * s.i2_factor * rb +
        16.0 * std::numbers::pi * kbt / (s.transconductance * s.feedback_resistance) *
            (s.channel_noise_factor + 1.0 / (s.transconductance * s.series_resistance)) * ct2 *
            s.i3_factor * rb * rb * rb +
        4.0 * std::numbers::pi * std::numbers::pi * kbt / (s.transconductance * s.transconductance) *
            ct2 * s.if_factor * rb * rb;
    nb.total = nb.shot + nb.thermal;
    return nb;
}

ChannelWorkspace build_channel_workspace(const Scenario& sc) {
    sc.validate();
    ChannelWorkspace ws;
    ws.hops = direction_cosines(sc.make_geometry());
    const int n = sc.pixel_count();
    const PixelOpticsSpec spec_tr = sc.optics_spec(true);
    const PixelOpticsSpec spec_rr = sc.optics_spec(false);
    ws.gain_tr.resize(n);
    ws.gain_rr.resize(n);
    for (int i = 0; i < n; ++i) {
        ws.gain_tr[i] = long_exposure_gain(ws.hops.mu_tr[i], spec_tr, sc.pixel_jitter(true, i),
                                           sc.optics.quadrature);
        ws.gain_rr[i] = long_exposure_gain(ws.hops.mu_rr[i], spec_rr, sc.pixel_jitter(false, i),
                                           sc.optics.quadrature);
    }
    ws.baseline.resize(n);
    ws.mean_power.resize(n);
    for (int i = 0; i < n; ++i) {
        const cplx h_tr = hop_field_gain(sc, ws, Hop::TR, i);
        const cplx h_rr = hop_field_gain(sc, ws, Hop::RR, i);
        ws.baseline[i] = h_rr * h_tr;
        ws.mean_power[i] = std::norm(ws.baseline[i]);
        ws.sum_mean_power += ws.mean_power[i];
        ws.sum_sqrt_mean_power += std::abs(ws.baseline[i]);
    }
    return ws;
}

cplx hop_field_gain(const Scenario& sc, const ChannelWorkspace& ws, Hop hop, int n) {
    const bool tr = hop == Hop::TR;
    const double d = tr ? ws.hops.d_tr[n] : ws.hops.d_rr[n];
    const double gain = tr ? ws.gain_tr[n] : ws.gain_rr[n];
    const double directivity = tr ? sc.link.tx_directivity : sc.link.rx_directivity;
    const double area = sc.geometry.pixel_width * sc.geometry.pixel_height;
    const double eta = sc.efficiency.eta();
    const double four_pi_d = 4.0 * std::numbers::pi * d;
    const double mag = std::sqrt(area * directivity * gain * eta / (four_pi_d * four_pi_d)) *
                       std::exp(-0.5 * sc.link.extinction * d);
    const double k = 2.0 * std::numbers::pi / sc.geometry.wavelength;
    return std::polar(mag, -k * d);
}

CascadedChannel cascaded_channel(const Scenario& sc, const ChannelWorkspace& ws,
                                 std::uint64_t seed) {
    const int n = sc.pixel_count();
    CascadedChannel ch;
    ch.seed = seed;
    ch.baseline = ws.baseline;
    ch.g.resize(n);
    ch.irradiance_tr.assign(n, 1.0);
    ch.irradiance_rr.assign(n, 1.0);
    Rng rng = make_rng(seed);
    if (sc.link.complex_fading) {
        for (int i = 0; i < n; ++i) ch.g[i] = ch.baseline[i] * circular_gaussian(rng, 1.0);
        return ch;
    }
    for (int i = 0; i < n; ++i) {
        ch.irradiance_tr[i] = sample_irradiance(sc.turbulence.tr, rng);
        ch.irradiance_rr[i] = sample_irradiance(sc.turbulence.rr, rng);
        ch.g[i] = ch.baseline[i] * std::sqrt(ch.irradiance_tr[i] * ch.irradiance_rr[i]);
    }
    return ch;
}

double mean_element_power(const Scenario&, const ChannelWorkspace& ws, int n) {
    return ws.mean_power[n];
}

double expected_optimal_snr(const Scenario& sc, const ChannelWorkspace& ws) {
    const NoiseBreakdown nb = noise_variance(sc.noise);
    double sum_abs = 0.0;
    for (std::size_t i = 0; i < ws.mean_power.size(); ++i)
        sum_abs += mean_abs_g(ws.mean_power[i], sc.turbulence.tr, sc.turbulence.rr);
    double cross = sum_abs * sum_abs;
    for (std::size_t i = 0; i < ws.mean_power.size(); ++i) {
        const double e = mean_abs_g(ws.mean_power[i], sc.turbulence.tr, sc.turbulence.rr);
        cross -= e * e;
    }
    return sc.link.data_power / nb.total * (ws.sum_mean_power + cross);
}

double pilot_snr(const Scenario& sc, const ChannelWorkspace& ws) {
    const NoiseBreakdown nb = noise_variance(sc.noise);
    return sc.pilot.pilot_power / nb.total * ws.sum_mean_power;
}

double coherent_pilot_snr(const Scenario& sc, const ChannelWorkspace& ws) {
    const NoiseBreakdown nb = noise_variance(sc.noise);
    double sum_abs = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < ws.mean_power.size(); ++i) {
        const double e = mean_abs_g(ws.mean_power[i], sc.turbulence.tr, sc.turbulence.rr);
        sum_abs += e;
        sum_sq += e * e;
    }
    return sc.pilot.pilot_power / nb.total * (ws.sum_mean_power + sum_abs * sum_abs - sum_sq);
}

} // namespace rislink
