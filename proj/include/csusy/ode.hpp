#pragma once

#include <cmath>
#include <functional>

#include "csusy/sampled.hpp"

namespace csusy {

struct OdeOptions {
    double blowup_cap = 1e150;
};

namespace detail {

/// One RK4 step of the first-order system (y, p)' = (p, c(x)y + g(x))
/// from x to x+h; callables are evaluated at x, x+h/2, x+h.
inline void rk4_step(const std::function<double(double)>& c,
                     const std::function<double(double)>& g,
                     double x, double h, double& y, double& p) {
    auto f = [&](double xi, double yi, double pi, double& ky, double& kp) {
        ky = pi;
        kp = c(xi) * yi + (g ? g(xi) : 0.0);
    };
    double k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p;
    f(x, y, p, k1y, k1p);
    f(x + 0.5 * h, y + 0.5 * h * k1y, p + 0.5 * h * k1p, k2y, k2p);
    f(x + 0.5 * h, y + 0.5 * h * k2y, p + 0.5 * h * k2p, k3y, k3p);
    f(x + h, y + h * k3y, p + h * k3p, k4y, k4p);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
}

} // namespace detail

/// Integrate y'' = coeff(x)*y + inhom(x) outward in both directions from the
/// anchor index with fixed-step RK4. Hitting the blow-up cap truncates the
/// valid range instead of failing; non-finite data is an error.
inline SampledFunction solve_linear_ode2(const std::function<double(double)>& coeff,
                                         const std::function<double(double)>& inhom,
                                         GridPtr grid, double y0, double dy0, int anchor,
                                         const OdeOptions& opt = {}) {
    if (anchor < 0 || anchor >= grid->n_points) throw Error("ode: anchor out of range");
    SampledFunction f = make_sampled(grid);
    const int n = grid->n_points;
    const double h = grid->h();

    f.v[static_cast<size_t>(anchor)] = y0;
    f.d[static_cast<size_t>(anchor)] = dy0;
    f.valid_lo = anchor;
    f.valid_hi = anchor;

    auto march = [&](int dir) {
        double y = y0, p = dy0;
        for (int i = anchor; i != (dir > 0 ? n - 1 : 0); i += dir) {
            const double x = (*grid)[i];
            detail::rk4_step(coeff, inhom, x, dir * h, y, p);
            if (!std::isfinite(y) || !std::isfinite(p))
                throw NonFiniteError("ode state", x + dir * h);
            const int j = i + dir;
            f.v[static_cast<size_t>(j)] = y;
            f.d[static_cast<size_t>(j)] = p;
            if (dir > 0) f.valid_hi = j; else f.valid_lo = j;
            if (std::abs(y) > opt.blowup_cap || std::abs(p) > opt.blowup_cap) break;
        }
    };
    march(+1);
    march(-1);
    if (f.valid_lo == 0 && f.valid_hi == n - 1) f.valid_hi = -1;
    return f;
}

/// Same, but coefficient and inhomogeneity are grid-sampled functions: the
/// integrator midpoints use cubic interpolation so the overall order stays 4.
inline SampledFunction solve_linear_ode2(const SampledFunction& coeff,
                                         const SampledFunction* inhom,
                                         double y0, double dy0, int anchor,
                                         const OdeOptions& opt = {}) {
    std::function<double(double)> g;
    if (inhom) g = as_callable(*inhom);
    SampledFunction f = solve_linear_ode2(as_callable(coeff), g, coeff.grid,
                                          y0, dy0, anchor, opt);
    attach_ode(f, coeff, inhom ? std::optional<SampledFunction>(*inhom) : std::nullopt);
    return f;
}

} // namespace csusy
