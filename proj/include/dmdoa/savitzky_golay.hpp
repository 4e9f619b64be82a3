#ifndef DMDOA_SAVITZKY_GOLAY_HPP
#define DMDOA_SAVITZKY_GOLAY_HPP

#include <vector>

#include "dmdoa/operators.hpp"
#include "dmdoa/trajectory.hpp"

namespace dmdoa {

struct SGConfig {
    int window = 21;   // odd sample count
    int polyorder = 7;
    int max_deriv = 3;

    int half() const { return window / 2; }
    void validate() const;
};

/// Central-point convolution kernels for derivative orders 0..max_deriv at
/// sample spacing dt. kernels[q][i] multiplies the sample at offset
/// i - half(); applying kernel q yields d^q/dt^q at the window center.
std::vector<std::vector<double>> sg_derivative_kernels(const SGConfig& cfg, double dt);

/// Per-element SG differentiation of the trajectory on the interior grid
/// (half a window trimmed at each end). Orders 1..max_deriv.
DerivativeStack numerical_derivatives(const Trajectory& traj, const SGConfig& cfg);

} // namespace dmdoa

#endif
