#ifndef DMDOA_ESTIMATORS_HPP
#define DMDOA_ESTIMATORS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "dmdoa/manifold_geometry.hpp"
#include "dmdoa/savitzky_golay.hpp"
#include "dmdoa/trajectory.hpp"

namespace dmdoa {

struct ThetaGrid {
    double min_rad = 0.0;
    double max_rad = 0.0;
    double step_rad = 0.0;

    std::size_t size() const;
    double theta(std::size_t i) const { return min_rad + static_cast<double>(i) * step_rad; }
    void validate() const;

    static ThetaGrid from_degrees(double min_deg, double max_deg, double step_deg);
};

enum class SpectrumKind { Framework1, Framework2, Music };

std::string to_string(SpectrumKind kind);

/// Raw (un-normalized) cost spectrum over the theta grid. Framework I values
/// are coherence scores in [0, 1]; Framework II values are 1/(J + eps);
/// MUSIC values are the pseudo-spectrum. `valid` is false when the features
/// carry no direction information (constant-curvature signals).
struct Spectrum {
    ThetaGrid grid;
    std::vector<double> values;
    SpectrumKind kind = SpectrumKind::Framework1;
    bool valid = true;
};

struct Peak {
    double theta_rad = 0.0;
    double value = 0.0;
};

struct Estimate {
    double theta_hat_rad = 0.0;
    std::vector<Peak> peaks; // local maxima, sorted by value descending
    bool ties = false;
};

struct EstimatorConfig {
    SGConfig sg;
    double w1 = 1.0; // kappa1 weight in the Framework II cost
    double w2 = 0.0; // kappa2 weight (opt-in; third derivatives are noise-fragile)
    SupportPolicy support = SupportPolicy::Strict;
    int threads = 0; // 0 = hardware concurrency
};

/// Framework I: coherent matching of the observed velocity stack (numeric
/// differentiation of obs) against the analytic model stack per theta.
/// score(theta) = |sum_n v_obs^H v_model| / (||v_obs|| ||v_model||).
Spectrum framework1_spectrum(const Trajectory& obs, const SignalModel& model,
                             const ArrayGeometry& geom, const ThetaGrid& grid,
                             const EstimatorConfig& cfg);

/// Framework II: curvature matching. Both sides run through the same
/// numeric-differentiation pipeline (obs as observed, model noiseless), so
/// the differentiation bias cancels in the cost
/// J(theta) = sum_n w1 (dk1)^2 + w2 (dk2)^2; spectrum value = 1/(J + eps).
Spectrum framework2_spectrum(const Trajectory& obs, const SignalModel& model,
                             const ArrayGeometry& geom, const ThetaGrid& grid,
                             const EstimatorConfig& cfg);

/// Narrowband MUSIC with a single-source noise subspace of dimension M - 1.
Spectrum music_spectrum(const Trajectory& obs, const ArrayGeometry& geom, double omega_c,
                        const ThetaGrid& grid);

/// Highest peak with deterministic tie-breaking (smallest |theta|, then
/// smallest theta, among peaks within 1e-6 relative of the maximum).
/// Endpoints count as peaks. Throws on invalid spectra.
Estimate pick_estimate(const Spectrum& spec);

/// Local maxima with value >= rel_threshold * max, sorted by theta.
std::vector<Peak> significant_peaks(const Spectrum& spec, double rel_threshold);

} // namespace dmdoa

#endif
