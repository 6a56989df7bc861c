#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "csusy/grid.hpp"

namespace csusy {

struct OdeContext;

/// A real function sampled on a grid, carrying values and first derivatives.
/// When the function is known to satisfy a linear second-order ODE
///     y'' = coeff(x) * y + inhom_scale * inhom(x),
/// the attached OdeContext lets callers reconstruct derivatives of order >= 2
/// exactly instead of differencing sampled data.
struct SampledFunction {
    GridPtr grid;
    std::vector<double> v; // values
    std::vector<double> d; // first derivatives
    std::optional<std::vector<double>> d2; // optional exact second derivatives
    std::shared_ptr<const OdeContext> ode;

    // Trustworthy index range; narrowed when an ODE integration hit the
    // blow-up cap before reaching a grid end.
    int valid_lo = 0;
    int valid_hi = -1;

    int n() const { return grid ? grid->n_points : 0; }
    int hi() const { return valid_hi < 0 ? n() - 1 : valid_hi; }
    int lo() const { return valid_lo; }
    bool fully_valid() const { return lo() == 0 && hi() == n() - 1; }

    double max_abs() const {
        double m = 0.0;
        for (int i = lo(); i <= hi(); ++i) m = std::max(m, std::abs(v[static_cast<size_t>(i)]));
        return m;
    }
};

struct OdeContext {
    SampledFunction coeff;                 // y'' = coeff*y + inhom_scale*inhom
    std::optional<SampledFunction> inhom;
    double inhom_scale = 1.0;
};

inline SampledFunction make_sampled(GridPtr g) {
    SampledFunction f;
    f.grid = std::move(g);
    f.v.assign(static_cast<size_t>(f.grid->n_points), 0.0);
    f.d.assign(static_cast<size_t>(f.grid->n_points), 0.0);
    return f;
}

/// Sample closed forms; d2fn is optional and enables 4th-derivative
/// reconstruction when this function is used as an ODE coefficient.
inline SampledFunction sample(GridPtr g,
                              const std::function<double(double)>& fn,
                              const std::function<double(double)>& dfn,
                              const std::function<double(double)>& d2fn = nullptr) {
    SampledFunction f = make_sampled(std::move(g));
    if (d2fn) f.d2.emplace(static_cast<size_t>(f.grid->n_points), 0.0);
    for (int i = 0; i < f.grid->n_points; ++i) {
        const double x = (*f.grid)[i];
        f.v[static_cast<size_t>(i)] = fn(x);
        f.d[static_cast<size_t>(i)] = dfn ? dfn(x) : 0.0;
        if (d2fn) (*f.d2)[static_cast<size_t>(i)] = d2fn(x);
    }
    return f;
}

inline void attach_ode(SampledFunction& f, SampledFunction coeff,
                       std::optional<SampledFunction> inhom = std::nullopt,
                       double inhom_scale = 1.0) {
    auto ctx = std::make_shared<OdeContext>();
    ctx->coeff = std::move(coeff);
    ctx->inhom = std::move(inhom);
    ctx->inhom_scale = inhom_scale;
    f.ode = std::move(ctx);
}

/// k-th derivative at grid index i. Orders 0 and 1 read the stored samples;
/// orders 2..4 are reconstructed through the ODE relation (and the chain rule
/// on the coefficient), never by differencing. Order 4 additionally needs the
/// coefficient's sampled second derivative.
inline double derivative_at(const SampledFunction& f, int i, int k) {
    const auto ui = static_cast<size_t>(i);
    switch (k) {
    case 0: return f.v[ui];
    case 1: return f.d[ui];
    default: break;
    }
    // The ODE reduction takes precedence over a stored analytic d2: Wronskian
    // cancellations rely on every member's higher derivatives coming from the
    // same chain relations.
    if (!f.ode) {
        if (k == 2 && f.d2) return (*f.d2)[ui];
        throw Error("derivative_at: order >= 2 requires an ODE context");
    }
    const OdeContext& c = *f.ode;
    const double cv = c.coeff.v[ui];
    const double cd = c.coeff.d[ui];
    switch (k) {
    case 2: {
        double r = cv * f.v[ui];
        if (c.inhom) r += c.inhom_scale * c.inhom->v[ui];
        return r;
    }
    case 3: {
        double r = cd * f.v[ui] + cv * f.d[ui];
        if (c.inhom) r += c.inhom_scale * derivative_at(*c.inhom, i, 1);
        return r;
    }
    case 4: {
        if (!c.coeff.d2)
            throw Error("derivative_at: order 4 requires coeff second derivative");
        double r = (*c.coeff.d2)[ui] * f.v[ui] + 2.0 * cd * f.d[ui] +
                   cv * derivative_at(f, i, 2);
        if (c.inhom) r += c.inhom_scale * derivative_at(*c.inhom, i, 2);
        return r;
    }
    default:
        throw Error("derivative_at: order > 4 not supported");
    }
}

/// Cubic Lagrange interpolation of the sampled values at an arbitrary x.
inline double value_at(const SampledFunction& f, double x) {
    const Grid& g = *f.grid;
    const int n = g.n_points;
    const double h = g.h();
    int i = static_cast<int>(std::floor((x - g.x0()) / h));
    i = std::clamp(i - 1, 0, n - 4);
    const double* xs = g.points.data() + i;
    const double* ys = f.v.data() + i;
    double r = 0.0;
    for (int j = 0; j < 4; ++j) {
        double lj = 1.0;
        for (int m = 0; m < 4; ++m)
            if (m != j) lj *= (x - xs[m]) / (xs[j] - xs[m]);
        r += lj * ys[j];
    }
    return r;
}

/// Wrap a sampled function as a callable for the ODE integrator.
inline std::function<double(double)> as_callable(const SampledFunction& f) {
    return [f](double x) { return value_at(f, x); };
}

// Pointwise helpers. All operands must share a grid layout.

inline SampledFunction fn_add(const SampledFunction& a, const SampledFunction& b,
                              double sa = 1.0, double sb = 1.0) {
    SampledFunction r = make_sampled(a.grid);
    for (size_t i = 0; i < r.v.size(); ++i) {
        r.v[i] = sa * a.v[i] + sb * b.v[i];
        r.d[i] = sa * a.d[i] + sb * b.d[i];
    }
    r.valid_lo = std::max(a.lo(), b.lo());
    r.valid_hi = std::min(a.hi(), b.hi());
    if (r.valid_hi == r.n() - 1 && r.valid_lo == 0) r.valid_hi = -1;
    return r;
}

inline SampledFunction fn_scale(const SampledFunction& a, double s) {
    SampledFunction r = a;
    for (size_t i = 0; i < r.v.size(); ++i) {
        r.v[i] *= s;
        r.d[i] *= s;
    }
    if (r.d2)
        for (auto& t : *r.d2) t *= s;
    r.ode.reset();
    return r;
}

inline SampledFunction fn_shift(const SampledFunction& a, double c) {
    SampledFunction r = a;
    for (auto& t : r.v) t += c;
    r.ode.reset();
    return r;
}

} // namespace csusy
