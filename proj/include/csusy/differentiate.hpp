#pragma once

#include <vector>

#include "csusy/sampled.hpp"

namespace csusy {

/// 4th-order finite-difference first derivative of a sampled sequence,
/// one-sided 5-point stencils at the ends.
inline std::vector<double> fd_derivative(const std::vector<double>& y, double h) {
    const size_t n = y.size();
    if (n < 5) throw Error("differentiate: grid too coarse for the stencil");
    std::vector<double> d(n);
    const double ih = 1.0 / h;
    d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / 12.0 * ih;
    d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / 12.0 * ih;
    for (size_t i = 2; i + 2 < n; ++i)
        d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / 12.0 * ih;
    d[n - 2] = (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) / 12.0 * ih;
    d[n - 1] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5]) / 12.0 * ih;
    return d;
}

/// 4th-order second derivative (central 5-point; one-sided at the ends via
/// two first-derivative passes).
inline std::vector<double> fd_second_derivative(const std::vector<double>& y, double h) {
    const size_t n = y.size();
    if (n < 6) throw Error("differentiate: grid too coarse for the stencil");
    std::vector<double> d(n);
    const double ih2 = 1.0 / (h * h);
    for (size_t i = 2; i + 2 < n; ++i)
        d[i] = (-y[i - 2] + 16.0 * y[i - 1] - 30.0 * y[i] + 16.0 * y[i + 1] - y[i + 2]) / 12.0 * ih2;
    auto d1 = fd_derivative(y, h);
    auto edge = fd_derivative(d1, h);
    d[0] = edge[0];
    d[1] = edge[1];
    d[n - 2] = edge[n - 2];
    d[n - 1] = edge[n - 1];
    return d;
}

/// First or second derivative as a SampledFunction. Prefers the exact ODE
/// reconstruction when a context is attached.
inline SampledFunction differentiate(const SampledFunction& f, int order) {
    if (order != 1 && order != 2) throw Error("differentiate: order must be 1 or 2");
    SampledFunction r = make_sampled(f.grid);
    r.valid_lo = f.valid_lo;
    r.valid_hi = f.valid_hi;
    const int n = f.n();
    if (order == 1) {
        r.v = f.d;
        if (f.ode || f.d2)
            for (int i = 0; i < n; ++i) r.d[static_cast<size_t>(i)] = derivative_at(f, i, 2);
        else
            r.d = fd_second_derivative(f.v, f.grid->h());
        return r;
    }
    if (f.ode || f.d2) {
        for (int i = 0; i < n; ++i) r.v[static_cast<size_t>(i)] = derivative_at(f, i, 2);
        if (f.ode)
            for (int i = 0; i < n; ++i) r.d[static_cast<size_t>(i)] = derivative_at(f, i, 3);
        else
            r.d = fd_derivative(r.v, f.grid->h());
    } else {
        r.v = fd_second_derivative(f.v, f.grid->h());
        r.d = fd_derivative(r.v, f.grid->h());
    }
    return r;
}

} // namespace csusy
