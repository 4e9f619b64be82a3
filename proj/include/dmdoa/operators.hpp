#ifndef DMDOA_OPERATORS_HPP
#define DMDOA_OPERATORS_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "dmdoa/trajectory.hpp"

namespace dmdoa {

using cdouble = std::complex<double>;

struct DiagonalOperator {
    std::vector<cdouble> diag;
};

/// Dynamic generator and its first two time derivatives, sampled on a grid.
/// Entries: Omega = j w(t - tau_m), dOmega = j w'(t - tau_m),
/// ddOmega = j w''(t - tau_m). Diagonals are purely imaginary for the
/// lossless models here (anti-Hermitian generator).
struct OperatorStack {
    SamplingGrid grid;
    std::size_t n_elements = 0;
    std::vector<double> tau;
    std::vector<cdouble> omega;       // n x M
    std::vector<cdouble> omega_dot;   // n x M
    std::vector<cdouble> omega_ddot;  // n x M

    std::span<const cdouble> om(std::size_t n) const { return {omega.data() + n * n_elements, n_elements}; }
    std::span<const cdouble> om_dot(std::size_t n) const {
        return {omega_dot.data() + n * n_elements, n_elements};
    }
    std::span<const cdouble> om_ddot(std::size_t n) const {
        return {omega_ddot.data() + n * n_elements, n_elements};
    }
};

OperatorStack build_operator_stack(const SignalModel& model, const ArrayGeometry& geom, double theta,
                                   const SamplingGrid& grid,
                                   SupportPolicy support = SupportPolicy::Strict);

/// v = Omega x
void velocity(std::span<const cdouble> x, const OperatorStack& ops, std::size_t n,
              std::span<cdouble> out);
/// a = (dOmega + Omega^2) x
void acceleration(std::span<const cdouble> x, const OperatorStack& ops, std::size_t n,
                  std::span<cdouble> out);
/// j = (ddOmega + 3 Omega dOmega + Omega^3) x; the diagonals commute, so this
/// equals the literal (ddOmega + 2 dOmega Omega + Omega dOmega + Omega^3) x.
void jerk(std::span<const cdouble> x, const OperatorStack& ops, std::size_t n, std::span<cdouble> out);

/// Time derivatives of the observation, orders 1..order(). `offset` indexes
/// the first entry into the source trajectory's grid (numeric stacks trim a
/// half window at each end).
struct DerivativeStack {
    enum class Source { Analytic, Numeric };

    Source source = Source::Analytic;
    std::size_t offset = 0;
    std::size_t n_samples = 0;
    std::size_t n_elements = 0;
    std::vector<std::vector<cdouble>> deriv; // deriv[q-1] holds order q, n x M

    std::size_t order() const { return deriv.size(); }
    std::span<const cdouble> at(std::size_t q, std::size_t n) const {
        return {deriv[q - 1].data() + n * n_elements, n_elements};
    }
    std::span<const cdouble> v(std::size_t n) const { return at(1, n); }
    std::span<const cdouble> acc(std::size_t n) const { return at(2, n); }
    std::span<const cdouble> jrk(std::size_t n) const { return at(3, n); }
};

/// Exact stacks from the operator algebra (orders 1..3) on the noiseless
/// trajectory implied by (model, geom, theta, grid).
DerivativeStack analytic_derivative_stack(const SignalModel& model, const ArrayGeometry& geom,
                                          double theta, const SamplingGrid& grid,
                                          SupportPolicy support = SupportPolicy::Strict);

/// Same, but applied to externally supplied samples (e.g. a phase-rotated
/// trajectory) with operators built from (model, geom, theta).
DerivativeStack analytic_derivative_stack(const Trajectory& traj, const OperatorStack& ops);

/// Truncated expansion j [ w(t) I + sum_{n=1..order} (-1)^n / n! w^(n)(t) T^n ],
/// order in {0, 1, 2}. Validation helper against the exact operator.
DiagonalOperator taylor_truncated_operator(const SignalModel& model, const ArrayGeometry& geom,
                                           double theta, double t, int order);

/// ||v(theta1, t) - alpha v(theta2, t)|| per sample for a steering-aliased
/// pair, alpha being the reference element's narrowband alias ratio. Throws
/// if theta2 does not alias theta1 at the carrier.
std::vector<double> ambiguity_residual(const SignalModel& model, const ArrayGeometry& geom,
                                       double theta1, double theta2, const SamplingGrid& grid,
                                       SupportPolicy support = SupportPolicy::Strict);

/// max_m |Re diag Omega| over the stack, normalized by |omega|; Lemma-style
/// anti-Hermitian check (0 for these models by construction).
double max_real_part_ratio(const OperatorStack& ops);

/// max over sampled (k, m) in {0,1}^2 of |Re< Omega^{2k+1} x, Omega^{2m} x >|
/// relative to the factor norms; checked every `stride` samples.
double max_power_orthogonality_residual(const Trajectory& traj, const OperatorStack& ops,
                                        std::size_t stride = 100);

} // namespace dmdoa

#endif
