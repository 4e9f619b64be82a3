#include "dmdoa/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dmdoa/linalg.hpp"
#include "dmdoa/parallel.hpp"

namespace dmdoa {

namespace {
constexpr double kCostEpsilon = 1e-30; // keeps 1/(J + eps) finite
constexpr double kDegToRad = std::numbers::pi / 180.0;
} // namespace

std::size_t ThetaGrid::size() const {
    return static_cast<std::size_t>(std::floor((max_rad - min_rad) / step_rad + 0.5)) + 1;
}

void ThetaGrid::validate() const {
    if (!(step_rad > 0.0) || !(max_rad > min_rad)) throw std::invalid_argument("theta grid: bad bounds/step");
}

ThetaGrid ThetaGrid::from_degrees(double min_deg, double max_deg, double step_deg) {
    ThetaGrid g{min_deg * kDegToRad, max_deg * kDegToRad, step_deg * kDegToRad};
    g.validate();
    return g;
}

std::string to_string(SpectrumKind kind) {
    switch (kind) {
        case SpectrumKind::Framework1: return "framework1";
        case SpectrumKind::Framework2: return "framework2";
        case SpectrumKind::Music: return "music";
    }
    return "?";
}

Spectrum framework1_spectrum(const Trajectory& obs, const SignalModel& model,
                             const ArrayGeometry& geom, const ThetaGrid& grid,
                             const EstimatorConfig& cfg) {
    grid.validate();
    cfg.sg.validate();

    const DerivativeStack vobs = numerical_derivatives(obs, cfg.sg);
    double obs_energy = 0.0;
    for (std::size_t n = 0; n < vobs.n_samples; ++n) {
        const auto v = vobs.v(n);
        obs_energy += re_inner(v, v);
    }
    if (!(obs_energy > 0.0)) throw std::runtime_error("framework1: observation velocity energy is zero");

    Spectrum spec;
    spec.grid = grid;
    spec.kind = SpectrumKind::Framework1;
    spec.values.assign(grid.size(), 0.0);

    const std::size_t m_count = obs.n_elements;
    parallel_for(
        grid.size(),
        [&](std::size_t gi) {
            const double theta = grid.theta(gi);
            const OperatorStack ops = build_operator_stack(model, geom, theta, obs.grid, cfg.support);
            const Trajectory mtraj = synthesize(model, geom, theta, obs.grid, cfg.support);

            cdouble dot{0.0, 0.0};
            double model_energy = 0.0;
            std::vector<cdouble> vm(m_count);
            for (std::size_t n = 0; n < vobs.n_samples; ++n) {
                const std::size_t gn = n + vobs.offset;
                velocity(mtraj.x(gn), ops, gn, vm);
                const auto vo = vobs.v(n);
                for (std::size_t m = 0; m < m_count; ++m) {
                    dot += std::conj(vo[m]) * vm[m];
                    model_energy += std::norm(vm[m]);
                }
            }
            spec.values[gi] =
                model_energy > 0.0 ? std::abs(dot) / (std::sqrt(obs_energy) * std::sqrt(model_energy)) : 0.0;
        },
        cfg.threads);
    return spec;
}

Spectrum framework2_spectrum(const Trajectory& obs, const SignalModel& model,
                             const ArrayGeometry& geom, const ThetaGrid& grid,
                             const EstimatorConfig& cfg) {
    grid.validate();
    cfg.sg.validate();
    const bool use_torsion = cfg.w2 != 0.0;

    const DerivativeStack dobs = numerical_derivatives(obs, cfg.sg);
    const std::vector<double> k1_obs = curvature_projection(obs, dobs);
    std::vector<double> k2_obs;
    std::vector<std::uint8_t> k2_obs_valid;
    if (use_torsion) {
        auto [k2, flags] = torsion_projection(obs, dobs, k1_obs);
        k2_obs = std::move(k2);
        k2_obs_valid = std::move(flags);
    }

    Spectrum spec;
    spec.grid = grid;
    spec.kind = SpectrumKind::Framework2;
    spec.values.assign(grid.size(), 0.0);

    // Model curvature spread across the scan decides whether the features
    // discriminate theta at all (constant-curvature signals do not).
    std::vector<double> k1_model_min(grid.size(), 0.0);
    std::vector<double> k1_model_max(grid.size(), 0.0);

    parallel_for(
        grid.size(),
        [&](std::size_t gi) {
            const double theta = grid.theta(gi);
            const Trajectory mtraj = synthesize(model, geom, theta, obs.grid, cfg.support);
            const DerivativeStack dmod = numerical_derivatives(mtraj, cfg.sg);
            const std::vector<double> k1_model = curvature_projection(mtraj, dmod);

            double lo = k1_model.empty() ? 0.0 : k1_model[0];
            double hi = lo;
            double cost = 0.0;
            for (std::size_t n = 0; n < k1_model.size(); ++n) {
                const double dk = k1_obs[n] - k1_model[n];
                cost += cfg.w1 * dk * dk;
                lo = std::min(lo, k1_model[n]);
                hi = std::max(hi, k1_model[n]);
            }
            if (use_torsion) {
                auto [k2_model, k2_model_valid] = torsion_projection(mtraj, dmod, k1_model);
                for (std::size_t n = 0; n < k2_model.size(); ++n) {
                    if (!k2_obs_valid[n] || !k2_model_valid[n]) continue; // degenerate samples drop out
                    const double dk = k2_obs[n] - k2_model[n];
                    cost += cfg.w2 * dk * dk;
                }
            }
            spec.values[gi] = 1.0 / (cost + kCostEpsilon);
            k1_model_min[gi] = lo;
            k1_model_max[gi] = hi;
        },
        cfg.threads);

    const double global_min = *std::min_element(k1_model_min.begin(), k1_model_min.end());
    const double global_max = *std::max_element(k1_model_max.begin(), k1_model_max.end());
    const double mean_level = 0.5 * (global_min + global_max);
    spec.valid = (global_max - global_min) > 1e-6 * std::max(mean_level, 1e-300);
    return spec;
}

Spectrum music_spectrum(const Trajectory& obs, const ArrayGeometry& geom, double omega_c,
                        const ThetaGrid& grid) {
    grid.validate();
    const std::size_t m_count = obs.n_elements;
    const std::size_t n = obs.grid.n_samples;
    if (m_count < 2) throw std::invalid_argument("music: need at least 2 elements");
    if (n < m_count) throw std::invalid_argument("music: need at least M snapshots");

    // Sample covariance R = (1/N) sum x x^H.
    std::vector<cdouble> r(m_count * m_count, cdouble{0.0, 0.0});
    for (std::size_t s = 0; s < n; ++s) {
        const auto x = obs.x(s);
        for (std::size_t i = 0; i < m_count; ++i)
            for (std::size_t j = 0; j < m_count; ++j) r[i * m_count + j] += x[i] * std::conj(x[j]);
    }
    for (auto& z : r) z /= static_cast<double>(n);

    const HermitianEigen eig = hermitian_eigen(r, m_count);

    // Noise subspace: eigenvectors of the M-1 smallest eigenvalues.
    Spectrum spec;
    spec.grid = grid;
    spec.kind = SpectrumKind::Music;
    spec.values.assign(grid.size(), 0.0);
    std::vector<cdouble> en(m_count * (m_count - 1));
    for (std::size_t col = 0; col + 1 < m_count; ++col)
        for (std::size_t row = 0; row < m_count; ++row) en[col * m_count + row] = eig.vec(row, col);

    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const auto a = steering_vector(geom, grid.theta(gi), omega_c);
        double denom = 0.0;
        for (std::size_t col = 0; col + 1 < m_count; ++col) {
            cdouble proj{0.0, 0.0};
            for (std::size_t row = 0; row < m_count; ++row)
                proj += std::conj(en[col * m_count + row]) * a[row];
            denom += std::norm(proj);
        }
        spec.values[gi] = 1.0 / (denom + kCostEpsilon);
    }
    return spec;
}

std::vector<Peak> significant_peaks(const Spectrum& spec, double rel_threshold) {
    if (!spec.valid) throw std::runtime_error("significant_peaks: spectrum marked invalid");
    const auto& v = spec.values;
    const double vmax = *std::max_element(v.begin(), v.end());
    std::vector<Peak> peaks;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const bool left_ok = (i == 0) || v[i] > v[i - 1];
        const bool right_ok = (i + 1 == v.size()) || v[i] >= v[i + 1];
        if (left_ok && right_ok && v[i] >= rel_threshold * vmax)
            peaks.push_back({spec.grid.theta(i), v[i]});
    }
    return peaks;
}

Estimate pick_estimate(const Spectrum& spec) {
    if (!spec.valid) throw std::runtime_error("pick_estimate: spectrum marked invalid");
    if (spec.values.empty()) throw std::runtime_error("pick_estimate: empty spectrum");

    Estimate est;
    est.peaks = significant_peaks(spec, 0.0);
    std::stable_sort(est.peaks.begin(), est.peaks.end(),
                     [](const Peak& a, const Peak& b) { return a.value > b.value; });

    const double vmax = est.peaks.front().value;
    const double tie_tol = 1e-6 * std::abs(vmax);
    std::vector<const Peak*> contenders;
    for (const auto& p : est.peaks)
        if (vmax - p.value <= tie_tol) contenders.push_back(&p);

    est.ties = est.peaks.size() >= 2 && (est.peaks[0].value - est.peaks[1].value) <= tie_tol;

    const Peak* best = contenders.front();
    for (const Peak* p : contenders) {
        const double pa = std::abs(p->theta_rad);
        const double ba = std::abs(best->theta_rad);
        if (pa < ba || (pa == ba && p->theta_rad < best->theta_rad)) best = p;
    }
    est.theta_hat_rad = best->theta_rad;
    return est;
}

} // namespace dmdoa
