#pragma once

#include <vector>

#include "csusy/sampled.hpp"

namespace csusy {

namespace detail {

/// Integral over one grid cell [x_i, x_{i+1}] from a cubic through the four
/// surrounding samples; exact for cubics, O(h^5) per cell.
inline double cell_integral(const std::vector<double>& y, int i, int n, double h) {
    if (i == 0)
        return h * (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]) / 24.0;
    if (i == n - 2) {
        const size_t m = y.size() - 1;
        return h * (9.0 * y[m] + 19.0 * y[m - 1] - 5.0 * y[m - 2] + y[m - 3]) / 24.0;
    }
    const auto u = static_cast<size_t>(i);
    return h * (-y[u - 1] + 13.0 * y[u] + 13.0 * y[u + 1] - y[u + 2]) / 24.0;
}

} // namespace detail

/// Definite integral of the sampled values between two grid indices.
inline double integrate(const SampledFunction& f, int from, int to) {
    if (from > to) throw Error("integrate: from > to");
    const int n = f.grid->n_points;
    const double h = f.grid->h();
    double s = 0.0;
    for (int i = from; i < to; ++i) s += detail::cell_integral(f.v, i, n, h);
    return s;
}

inline double integrate(const SampledFunction& f) { return integrate(f, 0, f.n() - 1); }

/// Running antiderivative C with C[anchor] = 0, same order as integrate().
inline std::vector<double> cumulative(const std::vector<double>& y, GridPtr grid, int anchor) {
    const int n = grid->n_points;
    const double h = grid->h();
    std::vector<double> c(static_cast<size_t>(n), 0.0);
    for (int i = anchor; i < n - 1; ++i)
        c[static_cast<size_t>(i) + 1] = c[static_cast<size_t>(i)] + detail::cell_integral(y, i, n, h);
    for (int i = anchor; i > 0; --i)
        c[static_cast<size_t>(i) - 1] = c[static_cast<size_t>(i)] - detail::cell_integral(y, i - 1, n, h);
    return c;
}

inline std::vector<double> cumulative(const SampledFunction& f, int anchor) {
    return cumulative(f.v, f.grid, anchor);
}

} // namespace csusy
