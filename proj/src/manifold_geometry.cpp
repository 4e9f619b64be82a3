#include "dmdoa/manifold_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dmdoa/linalg.hpp"

namespace dmdoa {

namespace {

void check_shapes(const Trajectory& traj, const DerivativeStack& deriv) {
    if (traj.n_elements != deriv.n_elements)
        throw std::invalid_argument("manifold: trajectory/derivative element mismatch");
    if (deriv.offset + deriv.n_samples > traj.grid.n_samples)
        throw std::invalid_argument("manifold: derivative stack exceeds trajectory grid");
}

} // namespace

FrameSeries frenet_frame(const Trajectory& traj, const DerivativeStack& deriv) {
    check_shapes(traj, deriv);
    if (deriv.order() < 3) throw std::invalid_argument("frenet_frame: needs derivatives up to order 3");

    const std::size_t m_count = traj.n_elements;
    FrameSeries series;
    series.offset = deriv.offset;
    series.frames.resize(deriv.n_samples);

    std::vector<cdouble> r2(m_count), r3(m_count);
    for (std::size_t n = 0; n < deriv.n_samples; ++n) {
        FrameSample& f = series.frames[n];
        const auto v = deriv.v(n);
        const auto a = deriv.acc(n);
        const auto j = deriv.jrk(n);

        const double speed = norm2(v);
        if (!(speed > 0.0)) continue; // leave the whole sample unset

        f.u1.assign(v.begin(), v.end());
        for (auto& z : f.u1) z /= speed;

        f.c1 = re_inner(f.u1, a);
        for (std::size_t m = 0; m < m_count; ++m) r2[m] = a[m] - f.c1 * f.u1[m];
        const double nr2 = norm2(r2);
        if (nr2 > kDegeneracyFloor * norm2(a)) {
            f.u2_valid = true;
            f.u2 = r2;
            for (auto& z : f.u2) z /= nr2;
        }

        if (f.u2_valid) {
            f.d1 = re_inner(f.u1, j);
            f.d2 = re_inner(f.u2, j);
            for (std::size_t m = 0; m < m_count; ++m)
                r3[m] = j[m] - f.d1 * f.u1[m] - f.d2 * f.u2[m];
            const double nr3 = norm2(r3);
            if (nr3 > kDegeneracyFloor * norm2(j)) {
                f.u3_valid = true;
                f.u3 = r3;
                for (auto& z : f.u3) z /= nr3;
            }
        }
    }
    return series;
}

std::vector<double> curvature_projection(const Trajectory& traj, const DerivativeStack& deriv) {
    check_shapes(traj, deriv);
    if (deriv.order() < 2) throw std::invalid_argument("curvature_projection: needs order 2");

    std::vector<double> kappa1(deriv.n_samples, 0.0);
    const std::size_t m_count = traj.n_elements;
    std::vector<cdouble> resid(m_count);
    for (std::size_t n = 0; n < deriv.n_samples; ++n) {
        const auto v = deriv.v(n);
        const auto a = deriv.acc(n);
        const double v2 = re_inner(v, v);
        if (!(v2 > 0.0)) continue;
        const double c1 = re_inner(v, a) / v2;
        for (std::size_t m = 0; m < m_count; ++m) resid[m] = a[m] - c1 * v[m];
        kappa1[n] = norm2(resid) / v2;
    }
    return kappa1;
}

std::pair<std::vector<double>, std::vector<std::uint8_t>> torsion_projection(
    const Trajectory& traj, const DerivativeStack& deriv, const std::vector<double>& kappa1) {
    check_shapes(traj, deriv);
    if (deriv.order() < 3) throw std::invalid_argument("torsion_projection: needs order 3");
    if (kappa1.size() != deriv.n_samples)
        throw std::invalid_argument("torsion_projection: kappa1 size mismatch");

    const std::size_t m_count = traj.n_elements;
    std::vector<double> kappa2(deriv.n_samples, 0.0);
    std::vector<std::uint8_t> valid(deriv.n_samples, 0);

    std::vector<cdouble> u1(m_count), u2(m_count), r(m_count);
    for (std::size_t n = 0; n < deriv.n_samples; ++n) {
        const auto v = deriv.v(n);
        const auto a = deriv.acc(n);
        const auto j = deriv.jrk(n);

        const double speed = norm2(v);
        if (!(speed > 0.0)) continue;
        for (std::size_t m = 0; m < m_count; ++m) u1[m] = v[m] / speed;

        const double c1 = re_inner(u1, a);
        for (std::size_t m = 0; m < m_count; ++m) r[m] = a[m] - c1 * u1[m];
        const double nr2 = norm2(r);
        if (nr2 <= kDegeneracyFloor * norm2(a)) continue; // kappa1 at the floor
        for (std::size_t m = 0; m < m_count; ++m) u2[m] = r[m] / nr2;

        const double d1 = re_inner(u1, j);
        const double d2 = re_inner(u2, j);
        for (std::size_t m = 0; m < m_count; ++m) r[m] = j[m] - d1 * u1[m] - d2 * u2[m];
        const double nr3 = norm2(r);
        if (nr3 <= kDegeneracyFloor * norm2(j)) continue; // planar: torsion undefined

        if (!(kappa1[n] > 0.0)) continue;
        kappa2[n] = nr3 / (kappa1[n] * speed * speed * speed);
        valid[n] = 1;
    }
    return {std::move(kappa2), std::move(valid)};
}

CurvatureSeries curvature_series(const Trajectory& traj, const DerivativeStack& deriv) {
    CurvatureSeries cs;
    cs.offset = deriv.offset;
    cs.kappa1 = curvature_projection(traj, deriv);
    auto [k2, flags] = torsion_projection(traj, deriv, cs.kappa1);
    cs.kappa2 = std::move(k2);
    cs.kappa2_valid = std::move(flags);
    cs.t.resize(deriv.n_samples);
    cs.speed.resize(deriv.n_samples);
    cs.kappa1_valid.assign(deriv.n_samples, 0);
    for (std::size_t n = 0; n < deriv.n_samples; ++n) {
        cs.t[n] = traj.grid.t(n + deriv.offset);
        cs.speed[n] = norm2(deriv.v(n));
        cs.kappa1_valid[n] = cs.speed[n] > 0.0 ? 1 : 0;
    }
    return cs;
}

namespace {

double kappa_dyn(const SignalModel& model, const ArrayGeometry& geom, double theta, double t) {
    // Rate terms at the centroid-delayed instant; stats are centroid-based
    // regardless of the geometry's display reference.
    const Vec3 dvec = direction_vector(theta);
    double tau_bar = 0.0;
    for (const auto& p : geom.positions)
        tau_bar += (p[0] * dvec[0] + p[1] * dvec[1] + p[2] * dvec[2]) / kSpeedOfLight;
    tau_bar /= static_cast<double>(geom.size());

    const DelayStats stats = delay_stats(geom, theta);
    const double arg = t - tau_bar;
    const double w = model.omega(arg);
    const double wd = model.omega_derivative(arg, 1);
    const double m_count = static_cast<double>(geom.size());
    return (2.0 / std::sqrt(m_count)) * (wd / w) * stats.std_tau;
}

} // namespace

double curvature_analytic(const SignalModel& model, const ArrayGeometry& geom, double theta, double t) {
    const double kd = kappa_dyn(model, geom, theta, t);
    const double kg2 = 1.0 / static_cast<double>(geom.size());
    return std::sqrt(kg2 + kd * kd);
}

double torsion_analytic(const SignalModel& model, const ArrayGeometry& geom, double theta, double t) {
    return std::abs(kappa_dyn(model, geom, theta, t));
}

GeneralizedFrameSeries generalized_frame(const Trajectory& traj, const DerivativeStack& deriv, int k) {
    check_shapes(traj, deriv);
    if (k < 1) throw std::invalid_argument("generalized_frame: k must be >= 1");
    if (static_cast<std::size_t>(k) > 2 * traj.n_elements)
        throw std::invalid_argument("generalized_frame: k exceeds the embedding dimension 2M");
    if (deriv.order() < static_cast<std::size_t>(k))
        throw std::invalid_argument("generalized_frame: derivative stack order below k");

    const std::size_t m_count = traj.n_elements;
    GeneralizedFrameSeries series;
    series.offset = deriv.offset;
    series.samples.resize(deriv.n_samples);

    std::vector<cdouble> r(m_count);
    for (std::size_t n = 0; n < deriv.n_samples; ++n) {
        GeneralizedFrameSample& s = series.samples[n];
        const double speed = norm2(deriv.v(n));
        if (!(speed > 0.0)) continue;

        // Modified Gram-Schmidt over derivatives 1..k; kappa_i from the
        // residual of derivative i+1 before normalization.
        double kappa_prod = 1.0;
        double speed_pow = speed; // ||v||^{i} while resolving u_i
        for (int q = 1; q <= k; ++q) {
            const auto d = deriv.at(static_cast<std::size_t>(q), n);
            r.assign(d.begin(), d.end());
            for (const auto& u_prev : s.u) {
                const double coef = re_inner(u_prev, r);
                for (std::size_t m = 0; m < m_count; ++m) r[m] -= coef * u_prev[m];
            }
            const double nr = norm2(r);
            if (q > 1) {
                speed_pow *= speed; // now ||v||^{q}
                if (nr <= kDegeneracyFloor * norm2(d)) break; // rank collapse: truncate
                const double kappa_q = nr / (kappa_prod * speed_pow);
                s.kappa.push_back(kappa_q);
                kappa_prod *= kappa_q;
            } else if (!(nr > 0.0)) {
                break;
            }
            for (auto& z : r) z /= nr;
            s.u.push_back(r);
        }
        s.achieved_order = s.u.size();
    }
    return series;
}

namespace {

double arc_integrand(const SignalModel& model, const std::vector<double>& tau, double t) {
    double acc = 0.0;
    for (double tm : tau) {
        const double w = model.omega(t - tm);
        acc += w * w;
    }
    return std::sqrt(acc);
}

double adaptive_simpson(const SignalModel& model, const std::vector<double>& tau, double a, double b,
                        double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = arc_integrand(model, tau, lm);
    const double frm = arc_integrand(model, tau, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(model, tau, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(model, tau, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double arc_length(const SignalModel& model, const ArrayGeometry& geom, double theta, double t_end,
                  double rel_tol) {
    if (t_end == 0.0) return 0.0;
    const std::vector<double> tau = delays(geom, theta);
    const double a = 0.0;
    const double b = t_end;
    const double fa = arc_integrand(model, tau, a);
    const double fb = arc_integrand(model, tau, b);
    const double fm = arc_integrand(model, tau, 0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = std::abs(whole) * rel_tol;
    return adaptive_simpson(model, tau, a, b, fa, fm, fb, whole, tol, 48);
}

namespace {

double real_embed(const Trajectory& traj, std::size_t row, std::size_t c) {
    const cdouble z = traj.samples[row * traj.n_elements + (c % traj.n_elements)];
    return c < traj.n_elements ? z.real() : z.imag();
}

HermitianEigen embedded_covariance_eigen(const Trajectory& traj, std::vector<double>& mean) {
    const std::size_t dim = 2 * traj.n_elements;
    const std::size_t n = traj.grid.n_samples;
    if (n <= 3) throw std::invalid_argument("pca: need more than 3 samples");

    mean.assign(dim, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < dim; ++c) mean[c] += real_embed(traj, r, c);
    for (auto& v : mean) v /= static_cast<double>(n);

    std::vector<double> cov(dim * dim, 0.0);
    std::vector<double> y(dim);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < dim; ++c) y[c] = real_embed(traj, r, c) - mean[c];
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j) cov[i * dim + j] += y[i] * y[j];
    }
    std::vector<cdouble> herm(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) {
            const double v = cov[i * dim + j] / static_cast<double>(n);
            herm[i * dim + j] = v;
            herm[j * dim + i] = v;
        }
    return hermitian_eigen(herm, dim);
}

} // namespace

std::vector<double> pca_component_energies(const Trajectory& traj) {
    std::vector<double> mean;
    const HermitianEigen eig = embedded_covariance_eigen(traj, mean);
    std::vector<double> energies(eig.values.rbegin(), eig.values.rend());
    for (auto& e : energies) e = std::max(e, 0.0);
    return energies;
}

std::vector<std::array<double, 3>> embed_3d(const Trajectory& traj) {
    const std::size_t dim = 2 * traj.n_elements;
    const std::size_t n = traj.grid.n_samples;
    std::vector<double> mean;
    const HermitianEigen eig = embedded_covariance_eigen(traj, mean);

    // Top three principal directions with a deterministic sign convention.
    std::vector<std::vector<double>> basis(3, std::vector<double>(dim, 0.0));
    for (std::size_t k = 0; k < 3 && k < dim; ++k) {
        const std::size_t col = dim - 1 - k; // eigenvalues ascending
        std::size_t imax = 0;
        double vmax = 0.0;
        for (std::size_t r = 0; r < dim; ++r) {
            const double val = eig.vec(r, col).real();
            basis[k][r] = val;
            if (std::abs(val) > vmax) {
                vmax = std::abs(val);
                imax = r;
            }
        }
        if (basis[k][imax] < 0.0)
            for (auto& v : basis[k]) v = -v;
    }

    std::vector<double> y(dim);
    std::vector<std::array<double, 3>> out(n, {0.0, 0.0, 0.0});
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < dim; ++c) y[c] = real_embed(traj, r, c) - mean[c];
        for (std::size_t k = 0; k < 3; ++k) {
            double acc = 0.0;
            for (std::size_t c = 0; c < dim; ++c) acc += basis[k][c] * y[c];
            out[r][k] = acc;
        }
    }
    return out;
}

} // namespace dmdoa
