#ifndef DMDOA_SCENARIO_HPP
#define DMDOA_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmdoa/estimators.hpp"
#include "dmdoa/trajectory.hpp"

namespace dmdoa {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhaseErrorSpec {
    enum class Mode { None, Seeded, Explicit };
    Mode mode = Mode::None;
    std::uint64_t seed = 0;
    bool redraw_per_trial = false;
    std::vector<double> phases_rad;
};

struct SamplingSpec {
    double oversample = 32.0;
    std::optional<double> dt_s;
    std::optional<double> margin_s;
    bool extended_support = false;

    SupportPolicy policy() const {
        return extended_support ? SupportPolicy::Extended : SupportPolicy::Strict;
    }
};

struct GridSpec {
    double min_deg = -90.0;
    double max_deg = 90.0;
    double step_deg = 0.05;

    ThetaGrid to_grid() const { return ThetaGrid::from_degrees(min_deg, max_deg, step_deg); }
};

/// Fully resolved run description. Parsing is strict: unknown keys are
/// rejected, and serializing back materializes every default so outputs are
/// self-describing.
struct ScenarioConfig {
    std::string name = "scenario";
    SignalModel signal;
    ArrayGeometry geometry;
    double theta_true_deg = 0.0;
    std::optional<double> snr_db; // nullopt = noiseless
    PhaseErrorSpec phase_error;
    SamplingSpec sampling;
    GridSpec grid;
    SGConfig sg;
    double w1 = 1.0;
    double w2 = 0.0;
    std::uint64_t master_seed = 1;
    int threads = 0;

    double theta_true_rad() const;
    EstimatorConfig estimator_config() const;

    /// Observation grid able to host theta_true plus the whole scan range.
    SamplingGrid make_grid() const;

    /// Noiseless -> noisy -> phase-rotated observation per the config.
    /// trial_index varies the noise stream (and Gamma, when redraw is set).
    Trajectory make_observation(std::uint64_t trial_index = 0) const;

    /// The Gamma actually applied for a given trial, empty phases when none.
    PhaseErrorModel resolve_phase_error(std::uint64_t trial_index = 0) const;

    std::uint64_t noise_seed(std::uint64_t trial_index) const;
};

ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig scenario_from_file(const std::string& path);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

} // namespace dmdoa

#endif
