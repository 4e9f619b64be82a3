#include "dmdoa/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "dmdoa/rng.hpp"

namespace dmdoa {

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ConfigError("config: unknown key '" + where + "." + key + "'");
    }
}

double require_number(const nlohmann::json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("config: missing '" + where + "." + key + "'");
    if (!j[key].is_number()) throw ConfigError("config: '" + where + "." + key + "' must be a number");
    return j[key].get<double>();
}

} // namespace

double ScenarioConfig::theta_true_rad() const { return theta_true_deg * std::numbers::pi / 180.0; }

EstimatorConfig ScenarioConfig::estimator_config() const {
    EstimatorConfig e;
    e.sg = sg;
    e.w1 = w1;
    e.w2 = w2;
    e.support = sampling.policy();
    e.threads = threads;
    return e;
}

SamplingGrid ScenarioConfig::make_grid() const {
    const double th = theta_true_rad();
    const double lo = grid.min_deg * std::numbers::pi / 180.0;
    const double hi = grid.max_deg * std::numbers::pi / 180.0;
    const double thetas[] = {th, lo, hi};
    return default_grid(signal, geometry, thetas, sg.half(), sampling.oversample, sampling.policy(),
                        sampling.dt_s, sampling.margin_s);
}

std::uint64_t ScenarioConfig::noise_seed(std::uint64_t trial_index) const {
    return mix_seed(master_seed, 0x6e6f6973ULL + trial_index);
}

PhaseErrorModel ScenarioConfig::resolve_phase_error(std::uint64_t trial_index) const {
    PhaseErrorModel gamma;
    switch (phase_error.mode) {
        case PhaseErrorSpec::Mode::None:
            break;
        case PhaseErrorSpec::Mode::Seeded: {
            const std::uint64_t seed = phase_error.redraw_per_trial
                                           ? mix_seed(phase_error.seed, trial_index)
                                           : phase_error.seed;
            gamma = PhaseErrorModel::random(geometry.size(), seed);
            break;
        }
        case PhaseErrorSpec::Mode::Explicit:
            gamma.phases = phase_error.phases_rad;
            break;
    }
    return gamma;
}

Trajectory ScenarioConfig::make_observation(std::uint64_t trial_index) const {
    const SamplingGrid g = make_grid();
    Trajectory traj = synthesize(signal, geometry, theta_true_rad(), g, sampling.policy());
    if (snr_db) {
        NoiseModel noise{*snr_db, noise_seed(trial_index)};
        traj = add_noise(traj, noise);
    }
    const PhaseErrorModel gamma = resolve_phase_error(trial_index);
    if (!gamma.phases.empty()) traj = apply_phase_error(traj, gamma);
    return traj;
}

ScenarioConfig scenario_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, {"name", "signal", "geometry", "theta_true_deg", "snr_db", "phase_error",
                            "sampling", "estimator", "master_seed", "threads"},
                        "<root>");
    ScenarioConfig cfg;
    if (j.contains("name")) cfg.name = j["name"].get<std::string>();

    if (!j.contains("signal")) throw ConfigError("config: missing 'signal'");
    {
        const auto& js = j["signal"];
        reject_unknown_keys(js, {"kind", "carrier_freq_hz", "pulse_width_s", "lfm_bandwidth_hz",
                                 "sfm_mod_freq_hz", "sfm_mod_index"},
                            "signal");
        if (!js.contains("kind")) throw ConfigError("config: missing 'signal.kind'");
        cfg.signal.kind = signal_kind_from_string(js["kind"].get<std::string>());
        cfg.signal.carrier_freq_hz = require_number(js, "carrier_freq_hz", "signal");
        cfg.signal.pulse_width_s = require_number(js, "pulse_width_s", "signal");
        if (js.contains("lfm_bandwidth_hz")) cfg.signal.lfm_bandwidth_hz = js["lfm_bandwidth_hz"].get<double>();
        if (js.contains("sfm_mod_freq_hz")) cfg.signal.sfm_mod_freq_hz = js["sfm_mod_freq_hz"].get<double>();
        if (js.contains("sfm_mod_index")) cfg.signal.sfm_mod_index = js["sfm_mod_index"].get<double>();
        try {
            cfg.signal.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: signal: ") + e.what());
        }
    }

    if (!j.contains("geometry")) throw ConfigError("config: missing 'geometry'");
    {
        const auto& jg = j["geometry"];
        reject_unknown_keys(jg, {"positions_m", "positions_d", "gaps_d", "reference"}, "geometry");
        DelayReference ref = DelayReference::FirstElement;
        if (jg.contains("reference")) {
            const std::string r = jg["reference"].get<std::string>();
            if (r == "first_element") ref = DelayReference::FirstElement;
            else if (r == "centroid") ref = DelayReference::Centroid;
            else throw ConfigError("config: geometry.reference must be first_element|centroid");
        }
        const int n_forms = jg.contains("positions_m") + jg.contains("positions_d") + jg.contains("gaps_d");
        if (n_forms != 1)
            throw ConfigError("config: geometry needs exactly one of positions_m|positions_d|gaps_d");
        try {
            if (jg.contains("positions_m")) {
                cfg.geometry.reference = ref;
                for (const auto& p : jg["positions_m"]) {
                    if (!p.is_array() || p.size() != 3)
                        throw ConfigError("config: geometry.positions_m entries must be [x,y,z]");
                    cfg.geometry.positions.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
                }
                cfg.geometry.validate();
            } else if (jg.contains("positions_d")) {
                cfg.geometry = geometry_from_positions_d(jg["positions_d"].get<std::vector<double>>(),
                                                         require_number(j["signal"], "carrier_freq_hz", "signal"), ref);
            } else {
                cfg.geometry = geometry_from_gaps_d(jg["gaps_d"].get<std::vector<double>>(),
                                                    require_number(j["signal"], "carrier_freq_hz", "signal"), ref);
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: geometry: ") + e.what());
        }
    }

    cfg.theta_true_deg = require_number(j, "theta_true_deg", "<root>");

    if (j.contains("snr_db")) {
        if (j["snr_db"].is_string()) {
            if (j["snr_db"].get<std::string>() != "none")
                throw ConfigError("config: snr_db must be a number or \"none\"");
        } else {
            cfg.snr_db = j["snr_db"].get<double>();
        }
    }

    if (j.contains("phase_error")) {
        const auto& jp = j["phase_error"];
        if (jp.is_string()) {
            if (jp.get<std::string>() != "none")
                throw ConfigError("config: phase_error must be \"none\" or an object");
        } else {
            reject_unknown_keys(jp, {"seed", "redraw_per_trial", "phases_rad"}, "phase_error");
            if (jp.contains("phases_rad") == jp.contains("seed"))
                throw ConfigError("config: phase_error needs exactly one of seed|phases_rad");
            if (jp.contains("seed")) {
                cfg.phase_error.mode = PhaseErrorSpec::Mode::Seeded;
                cfg.phase_error.seed = jp["seed"].get<std::uint64_t>();
                if (jp.contains("redraw_per_trial"))
                    cfg.phase_error.redraw_per_trial = jp["redraw_per_trial"].get<bool>();
            } else {
                cfg.phase_error.mode = PhaseErrorSpec::Mode::Explicit;
                cfg.phase_error.phases_rad = jp["phases_rad"].get<std::vector<double>>();
            }
        }
    }

    if (j.contains("sampling")) {
        const auto& jsmp = j["sampling"];
        reject_unknown_keys(jsmp, {"oversample", "dt_s", "margin_s", "extended_support"}, "sampling");
        if (jsmp.contains("oversample")) cfg.sampling.oversample = jsmp["oversample"].get<double>();
        if (jsmp.contains("dt_s") && !jsmp["dt_s"].is_null()) cfg.sampling.dt_s = jsmp["dt_s"].get<double>();
        if (jsmp.contains("margin_s") && !jsmp["margin_s"].is_null())
            cfg.sampling.margin_s = jsmp["margin_s"].get<double>();
        if (jsmp.contains("extended_support"))
            cfg.sampling.extended_support = jsmp["extended_support"].get<bool>();
        if (!(cfg.sampling.oversample > 0.0)) throw ConfigError("config: sampling.oversample must be > 0");
    }

    if (j.contains("estimator")) {
        const auto& je = j["estimator"];
        reject_unknown_keys(je, {"grid", "sg", "weights"}, "estimator");
        if (je.contains("grid")) {
            const auto& jg = je["grid"];
            reject_unknown_keys(jg, {"min_deg", "max_deg", "step_deg"}, "estimator.grid");
            if (jg.contains("min_deg")) cfg.grid.min_deg = jg["min_deg"].get<double>();
            if (jg.contains("max_deg")) cfg.grid.max_deg = jg["max_deg"].get<double>();
            if (jg.contains("step_deg")) cfg.grid.step_deg = jg["step_deg"].get<double>();
            try {
                cfg.grid.to_grid();
            } catch (const std::exception& e) {
                throw ConfigError(std::string("config: estimator.grid: ") + e.what());
            }
        }
        if (je.contains("sg")) {
            const auto& jsg = je["sg"];
            reject_unknown_keys(jsg, {"window", "polyorder", "max_deriv"}, "estimator.sg");
            if (jsg.contains("window")) cfg.sg.window = jsg["window"].get<int>();
            if (jsg.contains("polyorder")) cfg.sg.polyorder = jsg["polyorder"].get<int>();
            if (jsg.contains("max_deriv")) cfg.sg.max_deriv = jsg["max_deriv"].get<int>();
            try {
                cfg.sg.validate();
            } catch (const std::exception& e) {
                throw ConfigError(std::string("config: estimator.sg: ") + e.what());
            }
        }
        if (je.contains("weights")) {
            const auto& jw = je["weights"];
            reject_unknown_keys(jw, {"w1", "w2"}, "estimator.weights");
            if (jw.contains("w1")) cfg.w1 = jw["w1"].get<double>();
            if (jw.contains("w2")) cfg.w2 = jw["w2"].get<double>();
        }
    }

    if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();

    if (cfg.phase_error.mode == PhaseErrorSpec::Mode::Explicit &&
        cfg.phase_error.phases_rad.size() != cfg.geometry.size())
        throw ConfigError("config: phase_error.phases_rad size must match the element count");

    return cfg;
}

ScenarioConfig scenario_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config: parse error in " + path + ": " + e.what());
    }
    return scenario_from_json(j);
}

nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["name"] = cfg.name;
    j["signal"] = {{"kind", to_string(cfg.signal.kind)},
                   {"carrier_freq_hz", cfg.signal.carrier_freq_hz},
                   {"pulse_width_s", cfg.signal.pulse_width_s},
                   {"lfm_bandwidth_hz", cfg.signal.lfm_bandwidth_hz},
                   {"sfm_mod_freq_hz", cfg.signal.sfm_mod_freq_hz},
                   {"sfm_mod_index", cfg.signal.sfm_mod_index}};
    nlohmann::json pos = nlohmann::json::array();
    for (const auto& p : cfg.geometry.positions) pos.push_back({p[0], p[1], p[2]});
    j["geometry"] = {{"positions_m", pos},
                     {"reference", cfg.geometry.reference == DelayReference::Centroid ? "centroid"
                                                                                      : "first_element"}};
    j["theta_true_deg"] = cfg.theta_true_deg;
    if (cfg.snr_db) j["snr_db"] = *cfg.snr_db;
    else j["snr_db"] = "none";
    switch (cfg.phase_error.mode) {
        case PhaseErrorSpec::Mode::None:
            j["phase_error"] = "none";
            break;
        case PhaseErrorSpec::Mode::Seeded:
            j["phase_error"] = {{"seed", cfg.phase_error.seed},
                                {"redraw_per_trial", cfg.phase_error.redraw_per_trial}};
            break;
        case PhaseErrorSpec::Mode::Explicit:
            j["phase_error"] = {{"phases_rad", cfg.phase_error.phases_rad}};
            break;
    }
    j["sampling"] = {{"oversample", cfg.sampling.oversample},
                     {"dt_s", cfg.sampling.dt_s ? nlohmann::json(*cfg.sampling.dt_s) : nlohmann::json()},
                     {"margin_s",
                      cfg.sampling.margin_s ? nlohmann::json(*cfg.sampling.margin_s) : nlohmann::json()},
                     {"extended_support", cfg.sampling.extended_support}};
    j["estimator"] = {{"grid",
                       {{"min_deg", cfg.grid.min_deg},
                        {"max_deg", cfg.grid.max_deg},
                        {"step_deg", cfg.grid.step_deg}}},
                      {"sg",
                       {{"window", cfg.sg.window},
                        {"polyorder", cfg.sg.polyorder},
                        {"max_deriv", cfg.sg.max_deriv}}},
                      {"weights", {{"w1", cfg.w1}, {"w2", cfg.w2}}}};
    j["master_seed"] = cfg.master_seed;
    j["threads"] = cfg.threads;
    return j;
}

} // namespace dmdoa
