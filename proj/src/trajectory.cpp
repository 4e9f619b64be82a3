#include "dmdoa/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dmdoa/rng.hpp"

namespace dmdoa {

void SamplingGrid::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("sampling: dt must be > 0");
    if (n_samples < 2) throw std::invalid_argument("sampling: need at least 2 samples");
}

double NoiseModel::sigma2() const { return std::pow(10.0, -snr_db / 10.0); }

PhaseErrorModel PhaseErrorModel::random(std::size_t n_elements, std::uint64_t seed) {
    PhaseErrorModel e;
    e.seed = seed;
    e.phases.resize(n_elements);
    std::mt19937_64 eng(seed);
    for (auto& p : e.phases) p = (uniform01(eng) * 2.0 - 1.0) * std::numbers::pi;
    return e;
}

Trajectory synthesize(const SignalModel& model, const ArrayGeometry& geom, double theta,
                      const SamplingGrid& grid, SupportPolicy support) {
    model.validate();
    geom.validate();
    grid.validate();

    const std::vector<double> tau = delays(geom, theta);
    const std::size_t m_count = tau.size();

    if (support == SupportPolicy::Strict) {
        for (std::size_t m = 0; m < m_count; ++m) {
            const double lo = grid.t_start - tau[m];
            const double hi = grid.t_end() - tau[m];
            if (lo < 0.0 || hi > model.pulse_width_s) {
                const std::size_t bad_n = lo < 0.0 ? 0 : grid.n_samples - 1;
                throw std::runtime_error(
                    "synthesize: delayed argument outside pulse support at element " +
                    std::to_string(m) + ", sample " + std::to_string(bad_n) +
                    " (t - tau = " + std::to_string(lo < 0.0 ? lo : hi) + " s)");
            }
        }
    }

    Trajectory traj;
    traj.grid = grid;
    traj.n_elements = m_count;
    traj.samples.resize(grid.n_samples * m_count);
    traj.meta.signal_kind = to_string(model.kind);
    traj.meta.theta_true_rad = theta;

    for (std::size_t n = 0; n < grid.n_samples; ++n) {
        const double t = grid.t(n);
        auto row = traj.x(n);
        for (std::size_t m = 0; m < m_count; ++m) row[m] = model.sample(t - tau[m]);
    }
    return traj;
}

Trajectory add_noise(const Trajectory& traj, const NoiseModel& noise) {
    const double s2 = noise.sigma2();
    if (s2 == 0.0 || std::isinf(noise.snr_db)) return traj;

    Trajectory out = traj;
    out.meta.snr_db = noise.snr_db;
    out.meta.noise_seed = noise.seed;
    const double scale = std::sqrt(s2 / 2.0);
    GaussianGen gen(noise.seed);
    for (auto& z : out.samples) {
        const double re = gen.next();
        const double im = gen.next();
        z += std::complex<double>(scale * re, scale * im);
    }
    return out;
}

Trajectory apply_phase_error(const Trajectory& traj, const PhaseErrorModel& err) {
    if (err.phases.size() != traj.n_elements)
        throw std::invalid_argument("apply_phase_error: phase count != element count");
    Trajectory out = traj;
    out.meta.phase_error = true;
    out.meta.phase_seed = err.seed;
    std::vector<std::complex<double>> gamma(err.phases.size());
    for (std::size_t m = 0; m < gamma.size(); ++m) gamma[m] = std::polar(1.0, err.phases[m]);
    for (std::size_t n = 0; n < out.grid.n_samples; ++n) {
        auto row = out.x(n);
        for (std::size_t m = 0; m < gamma.size(); ++m) row[m] *= gamma[m];
    }
    return out;
}

SamplingGrid default_grid(const SignalModel& model, const ArrayGeometry& geom,
                          std::span<const double> thetas, int sg_half_window, double oversample,
                          SupportPolicy support, std::optional<double> dt_override,
                          std::optional<double> margin_override) {
    model.validate();
    if (thetas.empty()) throw std::invalid_argument("default_grid: need at least one theta");

    double max_abs_tau = 0.0;
    for (double th : thetas)
        for (double tau : delays(geom, th)) max_abs_tau = std::max(max_abs_tau, std::abs(tau));

    const double delay_margin = (support == SupportPolicy::Strict) ? max_abs_tau : 0.0;

    double dt;
    if (dt_override) {
        dt = *dt_override;
    } else {
        // Delayed arguments can leave [0, T_p]; rate the grid for the widest
        // frequency actually evaluated.
        const double f_max =
            model.max_abs_omega(-max_abs_tau, model.pulse_width_s + max_abs_tau) / (2.0 * std::numbers::pi);
        dt = 1.0 / (oversample * f_max);
    }

    const double margin = margin_override ? *margin_override
                                          : delay_margin + static_cast<double>(sg_half_window) * dt;
    const double t0 = margin;
    const double t1 = model.pulse_width_s - margin;
    if (!(t1 > t0))
        throw std::runtime_error("default_grid: empty observation window (margin " +
                                 std::to_string(margin) + " s exceeds half the pulse)");

    SamplingGrid grid;
    grid.t_start = t0;
    grid.dt = dt;
    grid.n_samples = static_cast<std::size_t>(std::floor((t1 - t0) / dt)) + 1;
    grid.validate();
    return grid;
}

} // namespace dmdoa
