#ifndef DMDOA_ARRAY_GEOMETRY_HPP
#define DMDOA_ARRAY_GEOMETRY_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace dmdoa {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

using Vec3 = std::array<double, 3>;

enum class DelayReference { FirstElement, Centroid };

/// Element positions in meters. Linear arrays live on the x axis with the
/// DOA measured from broadside, d(theta) = (sin, cos, 0).
struct ArrayGeometry {
    std::vector<Vec3> positions;
    DelayReference reference = DelayReference::FirstElement;

    std::size_t size() const { return positions.size(); }
    void validate() const;
};

/// ULA-style geometry from consecutive gaps expressed in units of
/// d = half the carrier wavelength (c / 2 f_c).
ArrayGeometry geometry_from_gaps_d(const std::vector<double>& gaps_d, double carrier_freq_hz,
                                   DelayReference reference = DelayReference::FirstElement);

/// Same, but the entries are absolute positions in units of d.
ArrayGeometry geometry_from_positions_d(const std::vector<double>& pos_d, double carrier_freq_hz,
                                        DelayReference reference = DelayReference::FirstElement);

/// Unit propagation direction for DOA theta (radians from broadside).
Vec3 direction_vector(double theta);

/// Propagation delays tau_m = p_m . d(theta) / c, shifted per the geometry's
/// reference convention.
std::vector<double> delays(const ArrayGeometry& geom, double theta);

/// Moments of the centroid-referenced delays (independent of the display
/// reference): population std, third and fourth raw moments.
struct DelayStats {
    double std_tau = 0.0; // seconds
    double mu3 = 0.0;     // s^3, (1/M) sum tau^3
    double mu4 = 0.0;     // s^4, (1/M) sum tau^4
};

DelayStats delay_stats(const ArrayGeometry& geom, double theta);

/// Narrowband steering vector a_m = e^{-j omega tau_m(theta)}.
std::vector<std::complex<double>> steering_vector(const ArrayGeometry& geom, double theta, double omega);

/// All angles in (-pi/2, pi/2) whose narrowband steering vector aliases
/// theta_true on a uniform linear array: sin(th) = sin(theta_true) + k
/// lambda / D. Includes theta_true; sorted ascending. Throws for
/// non-uniform geometries.
std::vector<double> grating_lobe_angles(const ArrayGeometry& geom, double theta_true, double omega);

} // namespace dmdoa

#endif
