#include "dmdoa/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dmdoa {

double re_inner(std::span<const cdouble> u, std::span<const cdouble> w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        acc += u[i].real() * w[i].real() + u[i].imag() * w[i].imag();
    }
    return acc;
}

double norm2(std::span<const cdouble> u) {
    double acc = 0.0;
    for (const auto& z : u) acc += std::norm(z);
    return std::sqrt(acc);
}

HermitianEigen hermitian_eigen(std::span<const cdouble> a, std::size_t n) {
    if (a.size() != n * n) throw std::invalid_argument("hermitian_eigen: bad dimensions");

    // Working copy (row-major input); V accumulates rotations column-major.
    std::vector<cdouble> m(a.begin(), a.end());
    std::vector<cdouble> v(n * n, cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    auto at = [&](std::size_t r, std::size_t c) -> cdouble& { return m[r * n + c]; };

    double fro = 0.0;
    for (const auto& z : m) fro += std::norm(z);
    fro = std::sqrt(fro);
    const double tol = 1e-15 * std::max(fro, 1e-300);

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(at(p, q));
        if (std::sqrt(off) < tol) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cdouble apq = at(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq < tol / n) continue;

                const double app = at(p, p).real();
                const double aqq = at(q, q).real();
                const cdouble phase = apq / abs_apq;

                // tan(2*theta) = 2|apq| / (app - aqq), stable form
                const double tau = (aqq - app) / (2.0 * abs_apq);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cdouble sp = s * phase;        // J(p,q) = s * e^{i arg(apq)}
                const cdouble spc = std::conj(sp);

                // A <- J^H A J with J = [[c, sp], [-conj(sp), c]] on rows/cols (p,q)
                for (std::size_t k = 0; k < n; ++k) {
                    const cdouble akp = at(k, p);
                    const cdouble akq = at(k, q);
                    at(k, p) = c * akp - spc * akq;
                    at(k, q) = sp * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cdouble apk = at(p, k);
                    const cdouble aqk = at(q, k);
                    at(p, k) = c * apk - sp * aqk;
                    at(q, k) = spc * apk + c * aqk;
                }
                at(p, q) = 0.0;
                at(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const cdouble vkp = v[p * n + k];
                    const cdouble vkq = v[q * n + k];
                    v[p * n + k] = c * vkp - spc * vkq;
                    v[q * n + k] = sp * vkp + c * vkq;
                }
            }
        }
    }

    HermitianEigen out;
    out.n = n;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = at(i, i).real();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return out.values[i] < out.values[j]; });

    std::vector<double> sorted_vals(n);
    std::vector<cdouble> sorted_vecs(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted_vals[k] = out.values[order[k]];
        for (std::size_t r = 0; r < n; ++r) sorted_vecs[k * n + r] = v[order[k] * n + r];
    }
    out.values = std::move(sorted_vals);
    out.vectors = std::move(sorted_vecs);
    return out;
}

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, std::size_t n) {
    if (a.size() != n * n || b.size() != n) throw std::invalid_argument("solve_dense: bad dimensions");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        if (a[pivot * n + col] == 0.0) throw std::runtime_error("solve_dense: singular matrix");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] * inv;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a[i * n + c] * x[c];
        x[i] = acc / a[i * n + i];
    }
    return x;
}

} // namespace dmdoa
