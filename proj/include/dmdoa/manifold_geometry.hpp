#ifndef DMDOA_MANIFOLD_GEOMETRY_HPP
#define DMDOA_MANIFOLD_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "dmdoa/operators.hpp"
#include "dmdoa/savitzky_golay.hpp"
#include "dmdoa/trajectory.hpp"

namespace dmdoa {

/// A projection residual below this fraction of the pre-projection norm is
/// treated as zero: the corresponding frame vector / curvature is flagged
/// undefined rather than normalized noise.
inline constexpr double kDegeneracyFloor = 1e-6;

/// Frenet frame sample under the wide-sense (real-part) inner product.
struct FrameSample {
    std::vector<cdouble> u1, u2, u3;
    double c1 = 0.0; // Re<u1, a>
    double d1 = 0.0; // Re<u1, j>
    double d2 = 0.0; // Re<u2, j>
    bool u2_valid = false;
    bool u3_valid = false;
};

struct FrameSeries {
    std::size_t offset = 0; // into the trajectory grid
    std::vector<FrameSample> frames;
};

struct CurvatureSeries {
    std::size_t offset = 0;
    std::vector<double> t;
    std::vector<double> speed;  // ||v||
    std::vector<double> kappa1;
    std::vector<double> kappa2;
    std::vector<std::uint8_t> kappa1_valid;
    std::vector<std::uint8_t> kappa2_valid;
};

FrameSeries frenet_frame(const Trajectory& traj, const DerivativeStack& deriv);

/// kappa1(t) = ||P_v^perp a|| / ||v||^2 per retained sample.
std::vector<double> curvature_projection(const Trajectory& traj, const DerivativeStack& deriv);

/// kappa2(t) = ||P_osc^perp j|| / (kappa1 ||v||^3); flags[i] is 0 where the
/// sample is degenerate (planar trajectory or kappa1 at the floor).
std::pair<std::vector<double>, std::vector<std::uint8_t>> torsion_projection(
    const Trajectory& traj, const DerivativeStack& deriv, const std::vector<double>& kappa1);

/// Convenience bundle of speed/kappa1/kappa2 with flags and timestamps.
CurvatureSeries curvature_series(const Trajectory& traj, const DerivativeStack& deriv);

/// Closed-form approximation sqrt(kappa_geo^2 + kappa_dyn^2) with
/// kappa_geo = 1/sqrt(M), kappa_dyn = (2/sqrt(M)) (w'/w) std(tau); the rate
/// terms are evaluated at the centroid-delayed time.
double curvature_analytic(const SignalModel& model, const ArrayGeometry& geom, double theta, double t);

/// |kappa_dyn| from the same decomposition.
double torsion_analytic(const SignalModel& model, const ArrayGeometry& geom, double theta, double t);

/// Generalized moving frame of order k by modified Gram-Schmidt on
/// successive derivatives under the wide-sense inner product, with the
/// generalized curvatures kappa_i = ||x_perp^(i+1)|| / (k1..k_{i-1} ||v||^{i+1}).
struct GeneralizedFrameSample {
    std::size_t achieved_order = 0;           // how many u_i were resolved
    std::vector<std::vector<cdouble>> u;      // u[0..achieved_order-1]
    std::vector<double> kappa;                // kappa[0..achieved_order-2]
};

struct GeneralizedFrameSeries {
    std::size_t offset = 0;
    std::vector<GeneralizedFrameSample> samples;
};

GeneralizedFrameSeries generalized_frame(const Trajectory& traj, const DerivativeStack& deriv, int k);

/// Exact arc length integral of sqrt(sum_m w^2(xi - tau_m)) over [0, t_end]
/// by adaptive Simpson quadrature.
double arc_length(const SignalModel& model, const ArrayGeometry& geom, double theta, double t_end,
                  double rel_tol = 1e-8);

/// Real-embeds each sample into R^{2M}, mean-centers, and projects onto the
/// top three principal directions. Rows follow the trajectory samples.
std::vector<std::array<double, 3>> embed_3d(const Trajectory& traj);

/// Variances captured by all 2M principal components, descending.
std::vector<double> pca_component_energies(const Trajectory& traj);

} // namespace dmdoa

#endif
