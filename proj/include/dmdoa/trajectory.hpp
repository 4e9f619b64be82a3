#ifndef DMDOA_TRAJECTORY_HPP
#define DMDOA_TRAJECTORY_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmdoa/array_geometry.hpp"
#include "dmdoa/signal_model.hpp"

namespace dmdoa {

struct SamplingGrid {
    double t_start = 0.0;
    double dt = 0.0;
    std::size_t n_samples = 0;

    double t(std::size_t n) const { return t_start + static_cast<double>(n) * dt; }
    double t_end() const { return t(n_samples == 0 ? 0 : n_samples - 1); }
    void validate() const;
};

/// Whether delayed arguments t - tau_m must stay inside the nominal pulse
/// [0, T_p]. Extended treats the phase law as defined on all of R, which the
/// ultra-large-aperture scenarios need (their delays exceed the pulse width).
enum class SupportPolicy { Strict, Extended };

struct Provenance {
    std::string signal_kind;
    double theta_true_rad = 0.0;
    std::optional<double> snr_db;
    bool phase_error = false;
    std::uint64_t noise_seed = 0;
    std::uint64_t phase_seed = 0;
};

/// Sampled observation x(t_n) in C^M, sample-major storage.
struct Trajectory {
    SamplingGrid grid;
    std::size_t n_elements = 0;
    std::vector<std::complex<double>> samples; // n_samples x M, row-major
    Provenance meta;

    std::span<const std::complex<double>> x(std::size_t n) const {
        return {samples.data() + n * n_elements, n_elements};
    }
    std::span<std::complex<double>> x(std::size_t n) {
        return {samples.data() + n * n_elements, n_elements};
    }
};

struct NoiseModel {
    double snr_db = 0.0; // per-element; unit signal power
    std::uint64_t seed = 0;

    double sigma2() const; // 10^(-snr/10)
};

struct PhaseErrorModel {
    std::vector<double> phases; // radians, one per element
    std::uint64_t seed = 0;

    /// Uniform draws on [-pi, pi), one per element.
    static PhaseErrorModel random(std::size_t n_elements, std::uint64_t seed);
};

/// Noiseless x_m(t_n) = e^{j phi(t_n - tau_m)} via the exact phase law.
/// Under Strict support every delayed argument must stay in [0, T_p];
/// violations throw with the offending element and sample identified.
Trajectory synthesize(const SignalModel& model, const ArrayGeometry& geom, double theta,
                      const SamplingGrid& grid, SupportPolicy support = SupportPolicy::Strict);

/// Adds i.i.d. circular complex Gaussian noise, variance sigma^2 per
/// element-sample, deterministic under the model's seed.
Trajectory add_noise(const Trajectory& traj, const NoiseModel& noise);

/// Left-multiplies by Gamma = diag(e^{j phi_m}); norm-preserving.
Trajectory apply_phase_error(const Trajectory& traj, const PhaseErrorModel& err);

/// Observation window [margin, T_p - margin] with
/// margin = max_m |tau_m| + sg_half_window * dt and dt = 1 / (oversample *
/// f_max), f_max taken over the delayed-argument range actually evaluated.
/// thetas lists every DOA the grid must accommodate (observation plus any
/// scan angles). Under Extended support the delay term of the margin is
/// dropped. Explicit overrides take precedence.
SamplingGrid default_grid(const SignalModel& model, const ArrayGeometry& geom,
                          std::span<const double> thetas, int sg_half_window,
                          double oversample = 32.0, SupportPolicy support = SupportPolicy::Strict,
                          std::optional<double> dt_override = std::nullopt,
                          std::optional<double> margin_override = std::nullopt);

} // namespace dmdoa

#endif
