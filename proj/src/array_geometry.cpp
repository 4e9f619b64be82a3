#include "dmdoa/array_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dmdoa {

void ArrayGeometry::validate() const {
    if (positions.size() < 2) throw std::invalid_argument("geometry: need at least 2 elements");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            const double dx = positions[i][0] - positions[j][0];
            const double dy = positions[i][1] - positions[j][1];
            const double dz = positions[i][2] - positions[j][2];
            if (dx * dx + dy * dy + dz * dz == 0.0)
                throw std::invalid_argument("geometry: duplicate element positions");
        }
    }
}

ArrayGeometry geometry_from_positions_d(const std::vector<double>& pos_d, double carrier_freq_hz,
                                        DelayReference reference) {
    if (!(carrier_freq_hz > 0.0)) throw std::invalid_argument("geometry: carrier_freq_hz must be > 0");
    const double d = kSpeedOfLight / (2.0 * carrier_freq_hz); // half wavelength at f_c
    ArrayGeometry g;
    g.reference = reference;
    g.positions.reserve(pos_d.size());
    for (double p : pos_d) g.positions.push_back({p * d, 0.0, 0.0});
    g.validate();
    return g;
}

ArrayGeometry geometry_from_gaps_d(const std::vector<double>& gaps_d, double carrier_freq_hz,
                                   DelayReference reference) {
    std::vector<double> pos_d(gaps_d.size() + 1, 0.0);
    for (std::size_t i = 0; i < gaps_d.size(); ++i) pos_d[i + 1] = pos_d[i] + gaps_d[i];
    return geometry_from_positions_d(pos_d, carrier_freq_hz, reference);
}

Vec3 direction_vector(double theta) {
    return {std::sin(theta), std::cos(theta), 0.0};
}

std::vector<double> delays(const ArrayGeometry& geom, double theta) {
    const Vec3 d = direction_vector(theta);
    std::vector<double> tau(geom.size());
    for (std::size_t m = 0; m < geom.size(); ++m) {
        const Vec3& p = geom.positions[m];
        tau[m] = (p[0] * d[0] + p[1] * d[1] + p[2] * d[2]) / kSpeedOfLight;
    }
    double shift = 0.0;
    if (geom.reference == DelayReference::FirstElement) {
        shift = tau[0];
    } else {
        for (double t : tau) shift += t;
        shift /= static_cast<double>(tau.size());
    }
    for (double& t : tau) t -= shift;
    return tau;
}

DelayStats delay_stats(const ArrayGeometry& geom, double theta) {
    std::vector<double> tau = delays(geom, theta);
    const double m_count = static_cast<double>(tau.size());
    double mean = 0.0;
    for (double t : tau) mean += t;
    mean /= m_count;
    DelayStats s;
    double var = 0.0;
    for (double t : tau) {
        const double c = t - mean;
        var += c * c;
        s.mu3 += c * c * c;
        s.mu4 += c * c * c * c;
    }
    s.std_tau = std::sqrt(var / m_count);
    s.mu3 /= m_count;
    s.mu4 /= m_count;
    return s;
}

std::vector<std::complex<double>> steering_vector(const ArrayGeometry& geom, double theta, double omega) {
    std::vector<double> tau = delays(geom, theta);
    std::vector<std::complex<double>> a(tau.size());
    for (std::size_t m = 0; m < tau.size(); ++m) a[m] = std::polar(1.0, -omega * tau[m]);
    return a;
}

std::vector<double> grating_lobe_angles(const ArrayGeometry& geom, double theta_true, double omega) {
    // Uniform linear array on the x axis required.
    const std::size_t m_count = geom.size();
    for (const auto& p : geom.positions) {
        if (p[1] != 0.0 || p[2] != 0.0)
            throw std::invalid_argument("grating_lobe_angles: geometry not on the x axis");
    }
    std::vector<double> xs(m_count);
    for (std::size_t m = 0; m < m_count; ++m) xs[m] = geom.positions[m][0];
    std::sort(xs.begin(), xs.end());
    const double spacing = xs[1] - xs[0];
    if (!(spacing > 0.0)) throw std::invalid_argument("grating_lobe_angles: degenerate spacing");
    for (std::size_t m = 2; m < m_count; ++m) {
        const double gap = xs[m] - xs[m - 1];
        if (std::abs(gap - spacing) > 1e-9 * spacing)
            throw std::invalid_argument("grating_lobe_angles: geometry is not a uniform linear array");
    }

    const double lambda = 2.0 * std::numbers::pi * kSpeedOfLight / omega;
    const double step = lambda / spacing;
    const double s0 = std::sin(theta_true);

    std::vector<double> out;
    const int k_lo = static_cast<int>(std::ceil((-1.0 - s0) / step));
    const int k_hi = static_cast<int>(std::floor((1.0 - s0) / step));
    for (int k = k_lo; k <= k_hi; ++k) {
        const double s = s0 + k * step;
        if (s <= -1.0 || s >= 1.0) continue;
        out.push_back(k == 0 ? theta_true : std::asin(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace dmdoa
