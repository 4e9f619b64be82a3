#include "dmdoa/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "dmdoa/linalg.hpp"

namespace dmdoa {

OperatorStack build_operator_stack(const SignalModel& model, const ArrayGeometry& geom, double theta,
                                   const SamplingGrid& grid, SupportPolicy support) {
    model.validate();
    grid.validate();

    OperatorStack ops;
    ops.grid = grid;
    ops.tau = delays(geom, theta);
    ops.n_elements = ops.tau.size();

    if (support == SupportPolicy::Strict) {
        for (std::size_t m = 0; m < ops.tau.size(); ++m) {
            const double lo = grid.t_start - ops.tau[m];
            const double hi = grid.t_end() - ops.tau[m];
            if (lo < 0.0 || hi > model.pulse_width_s)
                throw std::runtime_error("build_operator_stack: delayed argument outside pulse support at element " +
                                         std::to_string(m));
        }
    }

    const std::size_t n = grid.n_samples;
    const std::size_t m_count = ops.n_elements;
    ops.omega.resize(n * m_count);
    ops.omega_dot.resize(n * m_count);
    ops.omega_ddot.resize(n * m_count);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid.t(i);
        for (std::size_t m = 0; m < m_count; ++m) {
            const double arg = t - ops.tau[m];
            ops.omega[i * m_count + m] = cdouble(0.0, model.omega(arg));
            ops.omega_dot[i * m_count + m] = cdouble(0.0, model.omega_derivative(arg, 1));
            ops.omega_ddot[i * m_count + m] = cdouble(0.0, model.omega_derivative(arg, 2));
        }
    }
    return ops;
}

void velocity(std::span<const cdouble> x, const OperatorStack& ops, std::size_t n,
              std::span<cdouble> out) {
    const auto om = ops.om(n);
    for (std::size_t m = 0; m < x.size(); ++m) out[m] = om[m] * x[m];
}

void acceleration(std::span<const cdouble> x, const OperatorStack& ops, std::size_t n,
                  std::span<cdouble> out) {
    const auto om = ops.om(n);
    const auto od = ops.om_dot(n);
    for (std::size_t m = 0; m < x.size(); ++m) out[m] = (od[m] + om[m] * om[m]) * x[m];
}

void jerk(std::span<const cdouble> x, const OperatorStack& ops, std::size_t n, std::span<cdouble> out) {
    const auto om = ops.om(n);
    const auto od = ops.om_dot(n);
    const auto odd = ops.om_ddot(n);
    for (std::size_t m = 0; m < x.size(); ++m) {
        const cdouble w = om[m];
        out[m] = (odd[m] + 3.0 * (w * od[m]) + w * w * w) * x[m];
    }
}

DerivativeStack analytic_derivative_stack(const Trajectory& traj, const OperatorStack& ops) {
    if (traj.n_elements != ops.n_elements || traj.grid.n_samples != ops.grid.n_samples)
        throw std::invalid_argument("analytic_derivative_stack: trajectory/operator shape mismatch");

    DerivativeStack st;
    st.source = DerivativeStack::Source::Analytic;
    st.offset = 0;
    st.n_samples = traj.grid.n_samples;
    st.n_elements = traj.n_elements;
    st.deriv.assign(3, std::vector<cdouble>(st.n_samples * st.n_elements));
    for (std::size_t n = 0; n < st.n_samples; ++n) {
        const auto x = traj.x(n);
        std::span<cdouble> v{st.deriv[0].data() + n * st.n_elements, st.n_elements};
        std::span<cdouble> a{st.deriv[1].data() + n * st.n_elements, st.n_elements};
        std::span<cdouble> j{st.deriv[2].data() + n * st.n_elements, st.n_elements};
        velocity(x, ops, n, v);
        acceleration(x, ops, n, a);
        jerk(x, ops, n, j);
    }
    return st;
}

DerivativeStack analytic_derivative_stack(const SignalModel& model, const ArrayGeometry& geom,
                                          double theta, const SamplingGrid& grid,
                                          SupportPolicy support) {
    const Trajectory traj = synthesize(model, geom, theta, grid, support);
    const OperatorStack ops = build_operator_stack(model, geom, theta, grid, support);
    return analytic_derivative_stack(traj, ops);
}

DiagonalOperator taylor_truncated_operator(const SignalModel& model, const ArrayGeometry& geom,
                                           double theta, double t, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("taylor_truncated_operator: order must be 0..2");
    const std::vector<double> tau = delays(geom, theta);
    DiagonalOperator op;
    op.diag.resize(tau.size());
    const double w0 = model.omega(t);
    for (std::size_t m = 0; m < tau.size(); ++m) {
        double val = w0;
        if (order >= 1) val -= model.omega_derivative(t, 1) * tau[m];
        if (order >= 2) val += 0.5 * model.omega_derivative(t, 2) * tau[m] * tau[m];
        op.diag[m] = cdouble(0.0, val);
    }
    return op;
}

std::vector<double> ambiguity_residual(const SignalModel& model, const ArrayGeometry& geom,
                                       double theta1, double theta2, const SamplingGrid& grid,
                                       SupportPolicy support) {
    const double wc = model.omega_c();
    const auto a1 = steering_vector(geom, theta1, wc);
    const auto a2 = steering_vector(geom, theta2, wc);

    // Alias coefficient from the reference element; the pair must share the
    // whole narrowband steering vector up to that scalar.
    const cdouble gamma = a2[0] * std::conj(a1[0]);
    double mismatch = 0.0;
    for (std::size_t m = 0; m < a1.size(); ++m) mismatch += std::norm(a2[m] - gamma * a1[m]);
    mismatch = std::sqrt(mismatch);
    if (mismatch > 1e-6 * std::sqrt(static_cast<double>(a1.size())))
        throw std::invalid_argument("ambiguity_residual: theta2 is not steering-aliased with theta1 at the carrier");

    const cdouble alpha = a1[0] * std::conj(a2[0]); // x(theta1) = alpha x(theta2) for MP

    const DerivativeStack s1 = analytic_derivative_stack(model, geom, theta1, grid, support);
    const DerivativeStack s2 = analytic_derivative_stack(model, geom, theta2, grid, support);

    std::vector<double> out(grid.n_samples);
    for (std::size_t n = 0; n < grid.n_samples; ++n) {
        const auto v1 = s1.v(n);
        const auto v2 = s2.v(n);
        double acc = 0.0;
        for (std::size_t m = 0; m < v1.size(); ++m) acc += std::norm(v1[m] - alpha * v2[m]);
        out[n] = std::sqrt(acc);
    }
    return out;
}

double max_real_part_ratio(const OperatorStack& ops) {
    double worst = 0.0;
    for (std::size_t i = 0; i < ops.omega.size(); ++i) {
        const double mag = std::abs(ops.omega[i].imag());
        if (mag == 0.0) continue;
        worst = std::max(worst, std::abs(ops.omega[i].real()) / mag);
    }
    return worst;
}

double max_power_orthogonality_residual(const Trajectory& traj, const OperatorStack& ops,
                                        std::size_t stride) {
    if (stride == 0) stride = 1;
    double worst = 0.0;
    std::vector<cdouble> odd(traj.n_elements), even(traj.n_elements);
    for (std::size_t n = 0; n < traj.grid.n_samples; n += stride) {
        const auto x = traj.x(n);
        const auto om = ops.om(n);
        for (int k = 0; k <= 1; ++k) {
            for (int m2 = 0; m2 <= 1; ++m2) {
                for (std::size_t m = 0; m < x.size(); ++m) {
                    cdouble po = x[m];
                    for (int p = 0; p < 2 * k + 1; ++p) po *= om[m];
                    odd[m] = po;
                    cdouble pe = x[m];
                    for (int p = 0; p < 2 * m2; ++p) pe *= om[m];
                    even[m] = pe;
                }
                const double denom = norm2(odd) * norm2(even);
                if (denom == 0.0) continue;
                worst = std::max(worst, std::abs(re_inner(odd, even)) / denom);
            }
        }
    }
    return worst;
}

} // namespace dmdoa
