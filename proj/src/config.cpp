#include "rislink/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "rislink/errors.hpp"

namespace rislink {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// %.17g round-trips a double exactly through the parser.
std::string fmt_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

int to_int(const std::string& v, const std::string& key) {
    const double d = to_double(v, key);
    if (d != std::floor(d)) throw ConfigError("config: key '" + key + "' expects an integer");
    return static_cast<int>(d);
}

std::uint64_t to_u64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const std::uint64_t u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return u;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an unsigned integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("config: key '" + key + "' expects true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item, key));
    }
    if (out.empty()) throw ConfigError("config: key '" + key + "' expects a non-empty list");
    return out;
}

std::string list_to_string(const std::vector<double>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << fmt_number(v[i]);
    }
    return os.str();
}

// Field registry: one table drives parsing, emission and unknown-key
// rejection. Keys carry their unit in the name; values are stored in SI.
struct Field {
    std::function<void(Scenario&, const std::string&, const std::string&)> set;
    std::function<std::string(const Scenario&)> get;
};

using FieldMap = std::map<std::string, std::map<std::string, Field>>;

Field dbl(std::function<double&(Scenario&)> ref, double scale = 1.0) {
    Field f;
    f.get = [ref, scale](const Scenario& sc) {
        return fmt_number(ref(const_cast<Scenario&>(sc)) / scale);
    };
    f.set = [ref, scale](Scenario& sc, const std::string& v, const std::string& key) {
        ref(sc) = to_double(v, key) * scale;
    };
    return f;
}

Field intf(std::function<int&(Scenario&)> ref) {
    Field f;
    f.get = [ref](const Scenario& sc) { return std::to_string(ref(const_cast<Scenario&>(sc))); };
    f.set = [ref](Scenario& sc, const std::string& v, const std::string& key) {
        ref(sc) = to_int(v, key);
    };
    return f;
}

Field boolf(std::function<bool&(Scenario&)> ref) {
    Field f;
    f.get = [ref](const Scenario& sc) {
        return std::string(ref(const_cast<Scenario&>(sc)) ? "true" : "false");
    };
    f.set = [ref](Scenario& sc, const std::string& v, const std::string& key) {
        ref(sc) = to_bool(v, key);
    };
    return f;
}

Field u64f(std::function<std::uint64_t&(Scenario&)> ref) {
    Field f;
    f.get = [ref](const Scenario& sc) { return std::to_string(ref(const_cast<Scenario&>(sc))); };
    f.set = [ref](Scenario& sc, const std::string& v, const std::string& key) {
        ref(sc) = to_u64(v, key);
    };
    return f;
}

Field listf(std::function<std::vector<double>&(Scenario&)> ref) {
    Field f;
    f.get = [ref](const Scenario& sc) { return list_to_string(ref(const_cast<Scenario&>(sc))); };
    f.set = [ref](Scenario& sc, const std::string& v, const std::string& key) {
        ref(sc) = to_list(v, key);
    };
    return f;
}

template <typename Get, typename Set>
Field make_field(Get get, Set set) {
    Field f;
    f.get = [get](const Scenario& sc) { return std::string(get(sc)); };
    f.set = [set](Scenario& sc, const std::string& v, const std::string& key) { set(sc, v, key); };
    return f;
}

const FieldMap& field_map() {
    static const FieldMap map = [] {
        FieldMap m;
        auto& geo = m["geometry"];
        geo["tx_x_m"] = dbl([](Scenario& s) -> double& { return s.geometry.tx.x; });
        geo["tx_y_m"] = dbl([](Scenario& s) -> double& { return s.geometry.tx.y; });
        geo["tx_z_m"] = dbl([](Scenario& s) -> double& { return s.geometry.tx.z; });
        geo["ris_plane_z_m"] = dbl([](Scenario& s) -> double& { return s.geometry.ris_plane_z; });
        geo["rx_x_m"] = dbl([](Scenario& s) -> double& { return s.geometry.rx.x; });
        geo["rx_y_m"] = dbl([](Scenario& s) -> double& { return s.geometry.rx.y; });
        geo["rx_z_m"] = dbl([](Scenario& s) -> double& { return s.geometry.rx.z; });
        geo["grid_nx"] = intf([](Scenario& s) -> int& { return s.geometry.grid_nx; });
        geo["grid_ny"] = intf([](Scenario& s) -> int& { return s.geometry.grid_ny; });
        geo["lattice_pitch_mm"] =
            dbl([](Scenario& s) -> double& { return s.geometry.lattice_pitch; }, 1e-3);
        geo["pixel_width_mm"] = dbl([](Scenario& s) -> double& { return s.geometry.pixel_width; }, 1e-3);
        geo["pixel_height_mm"] =
            dbl([](Scenario& s) -> double& { return s.geometry.pixel_height; }, 1e-3);
        geo["wavelength_nm"] = dbl([](Scenario& s) -> double& { return s.geometry.wavelength; }, 1e-9);

        auto& opt = m["optics"];
        opt["strehl_tr"] = dbl([](Scenario& s) -> double& { return s.optics.strehl_tr; });
        opt["strehl_rr"] = dbl([](Scenario& s) -> double& { return s.optics.strehl_rr; });
        opt["obliquity_tr"] = dbl([](Scenario& s) -> double& { return s.optics.obliquity_tr; });
        opt["obliquity_rr"] = dbl([](Scenario& s) -> double& { return s.optics.obliquity_rr; });
        opt["quad_nodes_per_axis"] =
            intf([](Scenario& s) -> int& { return s.optics.quadrature.nodes_per_axis; });
        opt["quad_rtol"] =
            dbl([](Scenario& s) -> double& { return s.optics.quadrature.relative_tolerance; });
        opt["quad_method"] = make_field(
            [](const Scenario& s) {
                return s.optics.quadrature.method == QuadratureSpec::Method::fixed ? "fixed"
                                                                                   : "doubling";
            },
            [](Scenario& s, const std::string& v, const std::string& key) {
                if (v == "fixed") s.optics.quadrature.method = QuadratureSpec::Method::fixed;
                else if (v == "doubling") s.optics.quadrature.method = QuadratureSpec::Method::doubling;
                else throw ConfigError("config: key '" + key + "' expects fixed|doubling");
            });

        auto& jit = m["jitter"];
        jit["sigma_x_tr_mrad"] = dbl([](Scenario& s) -> double& { return s.jitter.sigma_x_tr; }, 1e-3);
        jit["sigma_y_tr_mrad"] = dbl([](Scenario& s) -> double& { return s.jitter.sigma_y_tr; }, 1e-3);
        jit["corr_tr"] = dbl([](Scenario& s) -> double& { return s.jitter.corr_tr; });
        jit["sigma_x_rr_mrad"] = dbl([](Scenario& s) -> double& { return s.jitter.sigma_x_rr; }, 1e-3);
        jit["sigma_y_rr_mrad"] = dbl([](Scenario& s) -> double& { return s.jitter.sigma_y_rr; }, 1e-3);
        jit["corr_rr"] = dbl([](Scenario& s) -> double& { return s.jitter.corr_rr; });

        auto& tur = m["turbulence"];
        auto regime_name = [](const TurbulenceSpec& t) {
            switch (t.regime) {
                case TurbulenceRegime::lognormal: return "lognormal";
                case TurbulenceRegime::gammagamma: return "gammagamma";
                default: return "none";
            }
        };
        auto set_regime = [](TurbulenceSpec& t, const std::string& v, const std::string& key) {
            if (v == "none") t.regime = TurbulenceRegime::none;
            else if (v == "lognormal") t.regime = TurbulenceRegime::lognormal;
            else if (v == "gammagamma") t.regime = TurbulenceRegime::gammagamma;
            else throw ConfigError("config: key '" + key + "' expects none|lognormal|gammagamma");
        };
        tur["regime_tr"] =
            make_field([regime_name](const Scenario& s) { return regime_name(s.turbulence.tr); },
                       [set_regime](Scenario& s, const std::string& v, const std::string& key) {
                           set_regime(s.turbulence.tr, v, key);
                       });
        tur["regime_rr"] =
            make_field([regime_name](const Scenario& s) { return regime_name(s.turbulence.rr); },
                       [set_regime](Scenario& s, const std::string& v, const std::string& key) {
                           set_regime(s.turbulence.rr, v, key);
                       });
        tur["sigma_ln_i_sq_tr"] =
            dbl([](Scenario& s) -> double& { return s.turbulence.tr.sigma_ln_i_sq; });
        tur["sigma_ln_i_sq_rr"] =
            dbl([](Scenario& s) -> double& { return s.turbulence.rr.sigma_ln_i_sq; });
        tur["alpha_gg_tr"] = dbl([](Scenario& s) -> double& { return s.turbulence.tr.alpha_gg; });
        tur["beta_gg_tr"] = dbl([](Scenario& s) -> double& { return s.turbulence.tr.beta_gg; });
        tur["alpha_gg_rr"] = dbl([](Scenario& s) -> double& { return s.turbulence.rr.alpha_gg; });
        tur["beta_gg_rr"] = dbl([](Scenario& s) -> double& { return s.turbulence.rr.beta_gg; });

        auto& eff = m["efficiency"];
        eff["reflectivity"] = dbl([](Scenario& s) -> double& { return s.efficiency.reflectivity; });
        eff["polarization_efficiency"] =
            dbl([](Scenario& s) -> double& { return s.efficiency.polarization_efficiency; });
        eff["insertion_loss"] = dbl([](Scenario& s) -> double& { return s.efficiency.insertion_loss; });

        auto& lnk = m["link"];
        lnk["tx_directivity"] = dbl([](Scenario& s) -> double& { return s.link.tx_directivity; });
        lnk["rx_directivity"] = dbl([](Scenario& s) -> double& { return s.link.rx_directivity; });
        lnk["extinction_per_m"] = dbl([](Scenario& s) -> double& { return s.link.extinction; });
        lnk["data_power_w"] = dbl([](Scenario& s) -> double& { return s.link.data_power; });
        lnk["complex_fading"] = boolf([](Scenario& s) -> bool& { return s.link.complex_fading; });

        auto& noi = m["noise"];
        noi["electron_charge_c"] = dbl([](Scenario& s) -> double& { return s.noise.electron_charge; });
        noi["responsivity_a_per_w"] = dbl([](Scenario& s) -> double& { return s.noise.responsivity; });
        noi["signal_power_w"] = dbl([](Scenario& s) -> double& { return s.noise.signal_power; });
        noi["background_power_w"] = dbl([](Scenario& s) -> double& { return s.noise.background_power; });
        noi["dark_current_a"] = dbl([](Scenario& s) -> double& { return s.noise.dark_current; });
        noi["bandwidth_hz"] = dbl([](Scenario& s) -> double& { return s.noise.bandwidth; });
        noi["boltzmann_j_per_k"] = dbl([](Scenario& s) -> double& { return s.noise.boltzmann; });
        noi["temperature_k"] = dbl([](Scenario& s) -> double& { return s.noise.temperature; });
        noi["feedback_resistance_ohm"] =
            dbl([](Scenario& s) -> double& { return s.noise.feedback_resistance; });
        noi["transconductance_s"] = dbl([](Scenario& s) -> double& { return s.noise.transconductance; });
        noi["channel_noise_factor"] =
            dbl([](Scenario& s) -> double& { return s.noise.channel_noise_factor; });
        noi["series_resistance_ohm"] =
            dbl([](Scenario& s) -> double& { return s.noise.series_resistance; });
        noi["input_capacitance_f"] =
            dbl([](Scenario& s) -> double& { return s.noise.input_capacitance; });
        noi["bit_rate_hz"] = dbl([](Scenario& s) -> double& { return s.noise.bit_rate; });
        noi["i2_factor"] = dbl([](Scenario& s) -> double& { return s.noise.i2_factor; });
        noi["i3_factor"] = dbl([](Scenario& s) -> double& { return s.noise.i3_factor; });
        noi["if_factor"] = dbl([](Scenario& s) -> double& { return s.noise.if_factor; });

        auto& pil = m["pilot"];
        pil["length"] = intf([](Scenario& s) -> int& { return s.pilot.length; });
        pil["auto_length"] = boolf([](Scenario& s) -> bool& { return s.pilot.auto_length; });
        pil["kind"] = make_field(
            [](const Scenario& s) {
                return s.pilot.kind == PilotKind::unitary_dft ? "unitary_dft" : "general";
            },
            [](Scenario& s, const std::string& v, const std::string& key) {
                if (v == "unitary_dft") s.pilot.kind = PilotKind::unitary_dft;
                else if (v == "general") s.pilot.kind = PilotKind::general;
                else throw ConfigError("config: key '" + key + "' expects unitary_dft|general");
            });
        pil["pilot_power_w"] = dbl([](Scenario& s) -> double& { return s.pilot.pilot_power; });
        pil["target_nmse"] = dbl([](Scenario& s) -> double& { return s.pilot.target_nmse; });
        pil["gamma_pilot_db"] = dbl([](Scenario& s) -> double& { return s.pilot.gamma_pilot_db; });

        auto& bud = m["budget"];
        bud["component_bits"] = intf([](Scenario& s) -> int& { return s.budget.budget.component_bits; });
        bud["auto_bits"] = boolf([](Scenario& s) -> bool& { return s.budget.auto_bits; });
        bud["spectral_efficiency_bit_per_s_hz"] =
            dbl([](Scenario& s) -> double& { return s.budget.budget.spectral_efficiency; });
        bud["feedback_bandwidth_hz"] =
            dbl([](Scenario& s) -> double& { return s.budget.budget.feedback_bandwidth; });
        bud["frame_duration_ms"] =
            dbl([](Scenario& s) -> double& { return s.budget.budget.frame_duration; }, 1e-3);
        bud["symbol_rate_sym_per_s"] =
            dbl([](Scenario& s) -> double& { return s.budget.budget.symbol_rate; });
        bud["min_data_duty"] = dbl([](Scenario& s) -> double& { return s.budget.budget.min_data_duty; });

        auto& ctl = m["control"];
        ctl["bits"] = intf([](Scenario& s) -> int& { return s.control.adapt.bits; });
        ctl["max_iterations"] = intf([](Scenario& s) -> int& { return s.control.adapt.max_iterations; });
        ctl["step"] = make_field(
            [](const Scenario& s) {
                return s.control.adapt.step == AdaptConfig::Step::constant ? "constant" : "diminishing";
            },
            [](Scenario& s, const std::string& v, const std::string& key) {
                if (v == "constant") s.control.adapt.step = AdaptConfig::Step::constant;
                else if (v == "diminishing") s.control.adapt.step = AdaptConfig::Step::diminishing;
                else throw ConfigError("config: key '" + key + "' expects constant|diminishing");
            });
        ctl["step_scale"] = dbl([](Scenario& s) -> double& { return s.control.adapt.step_scale; });
        ctl["tolerance"] = dbl([](Scenario& s) -> double& { return s.control.adapt.tolerance; });
        ctl["quantize_each_iteration"] =
            boolf([](Scenario& s) -> bool& { return s.control.adapt.quantize_each_iteration; });

        auto& exp = m["experiment"];
        exp["trials"] = intf([](Scenario& s) -> int& { return s.experiment.trials; });
        exp["master_seed"] =
            u64f([](Scenario& s) -> std::uint64_t& { return s.experiment.master_seed; });
        exp["threads"] = intf([](Scenario& s) -> int& { return s.experiment.threads; });
        exp["m_grid"] = listf([](Scenario& s) -> std::vector<double>& { return s.experiment.m_grid; });
        exp["gamma_db_grid"] =
            listf([](Scenario& s) -> std::vector<double>& { return s.experiment.gamma_db_grid; });
        exp["epsilon_grid"] =
            listf([](Scenario& s) -> std::vector<double>& { return s.experiment.epsilon_grid; });
        exp["k_fraction_grid"] =
            listf([](Scenario& s) -> std::vector<double>& { return s.experiment.k_fraction_grid; });
        exp["n_grid"] = listf([](Scenario& s) -> std::vector<double>& { return s.experiment.n_grid; });
        exp["area_n_grid"] =
            listf([](Scenario& s) -> std::vector<double>& { return s.experiment.area_n_grid; });
        exp["lambda_nm_grid"] =
            listf([](Scenario& s) -> std::vector<double>& { return s.experiment.lambda_nm_grid; });
        exp["pixel_mm_grid"] =
            listf([](Scenario& s) -> std::vector<double>& { return s.experiment.pixel_mm_grid; });
        exp["cs_bits"] = intf([](Scenario& s) -> int& { return s.experiment.cs_bits; });
        exp["map_points"] = intf([](Scenario& s) -> int& { return s.experiment.map_points; });
        exp["map_halfwidth_mu"] =
            dbl([](Scenario& s) -> double& { return s.experiment.map_halfwidth_mu; });
        return m;
    }();
    return map;
}

} // namespace

Scenario default_scenario() { return Scenario{}; }

Scenario parse_scenario(std::istream& in) {
    Scenario sc = default_scenario();
    const FieldMap& fields = field_map();
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (fields.find(section) == fields.end())
                throw ConfigError("config: unknown section '[" + section + "]'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError("config: key '" + key + "' appears before any section");
        const auto& sec = fields.at(section);
        const auto it = sec.find(key);
        if (it == sec.end())
            throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
        it->second.set(sc, value, section + "." + key);
    }
    sc.validate();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    return parse_scenario(in);
}

std::string emit_scenario(const Scenario& sc) {
    std::ostringstream os;
    for (const auto& [section, keys] : field_map()) {
        os << "[" << section << "]\n";
        for (const auto& [key, field] : keys) os << key << " = " << field.get(sc) << "\n";
        os << "\n";
    }
    return os.str();
}

std::uint64_t scenario_hash(const Scenario& sc) {
    const std::string text = emit_scenario(sc);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace rislink
