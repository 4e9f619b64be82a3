#include "dmdoa/savitzky_golay.hpp"

#include <cmath>
#include <stdexcept>

#include "dmdoa/linalg.hpp"

namespace dmdoa {

void SGConfig::validate() const {
    if (window < 3 || window % 2 == 0) throw std::invalid_argument("sg: window must be odd and >= 3");
    if (polyorder < 1 || polyorder >= window)
        throw std::invalid_argument("sg: polyorder must satisfy 1 <= polyorder < window");
    if (max_deriv < 1 || max_deriv > polyorder)
        throw std::invalid_argument("sg: max_deriv must satisfy 1 <= max_deriv <= polyorder");
}

std::vector<std::vector<double>> sg_derivative_kernels(const SGConfig& cfg, double dt) {
    cfg.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("sg: dt must be > 0");

    const int h = cfg.half();
    const int w = cfg.window;
    const int p = cfg.polyorder;

    // Least-squares fit in the normalized variable z = i / h, i = -h..h.
    // Row d of (V^T V)^{-1} V^T gives the centered d-th derivative weights.
    const double hs = static_cast<double>(h);
    std::vector<double> g((p + 1) * (p + 1), 0.0);
    for (int i = -h; i <= h; ++i) {
        const double z = static_cast<double>(i) / hs;
        double zj = 1.0;
        std::vector<double> pow(p + 1);
        for (int j = 0; j <= p; ++j) {
            pow[j] = zj;
            zj *= z;
        }
        for (int r = 0; r <= p; ++r)
            for (int c = 0; c <= p; ++c) g[r * (p + 1) + c] += pow[r] * pow[c];
    }

    std::vector<std::vector<double>> kernels(cfg.max_deriv + 1, std::vector<double>(w, 0.0));
    double dfact = 1.0;
    for (int d = 0; d <= cfg.max_deriv; ++d) {
        if (d > 0) dfact *= d;
        std::vector<double> e(p + 1, 0.0);
        e[d] = 1.0;
        const std::vector<double> a = solve_dense(g, e, p + 1);
        const double scale = dfact / std::pow(hs * dt, d);
        for (int i = -h; i <= h; ++i) {
            const double z = static_cast<double>(i) / hs;
            double acc = 0.0;
            double zj = 1.0;
            for (int j = 0; j <= p; ++j) {
                acc += a[j] * zj;
                zj *= z;
            }
            kernels[d][i + h] = acc * scale;
        }
    }
    return kernels;
}

DerivativeStack numerical_derivatives(const Trajectory& traj, const SGConfig& cfg) {
    cfg.validate();
    if (traj.grid.n_samples < static_cast<std::size_t>(cfg.window))
        throw std::invalid_argument("numerical_derivatives: window larger than trajectory");

    const auto kernels = sg_derivative_kernels(cfg, traj.grid.dt);
    const int h = cfg.half();
    const std::size_t m_count = traj.n_elements;
    const std::size_t n_out = traj.grid.n_samples - 2 * static_cast<std::size_t>(h);

    DerivativeStack st;
    st.source = DerivativeStack::Source::Numeric;
    st.offset = static_cast<std::size_t>(h);
    st.n_samples = n_out;
    st.n_elements = m_count;
    st.deriv.assign(cfg.max_deriv, std::vector<cdouble>(n_out * m_count));

    for (std::size_t n = 0; n < n_out; ++n) {
        const std::size_t center = n + static_cast<std::size_t>(h);
        for (int q = 1; q <= cfg.max_deriv; ++q) {
            const auto& k = kernels[q];
            cdouble* out = st.deriv[q - 1].data() + n * m_count;
            for (std::size_t m = 0; m < m_count; ++m) {
                cdouble acc{0.0, 0.0};
                const cdouble* col = traj.samples.data() + (center - h) * m_count + m;
                for (int i = 0; i < cfg.window; ++i) acc += k[i] * col[i * m_count];
                out[m] = acc;
            }
        }
    }
    return st;
}

} // namespace dmdoa
