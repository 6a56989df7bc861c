#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "csusy/errors.hpp"

namespace csusy {

/// Uniform grid on [a,b]. Open endpoints are never sampled exactly: the first
/// (last) point is offset from a (b) by the margin, so singular potentials
/// like l(l+1)/x^2 stay finite on every sampled point.
struct Grid {
    double a = 0.0;
    double b = 1.0;
    int n_points = 0;
    bool open_left = false;
    bool open_right = false;
    double margin = 0.0;
    std::vector<double> points;

    double x0() const { return points.front(); }
    double x1() const { return points.back(); }
    double h() const { return (x1() - x0()) / (n_points - 1); }
    int mid() const { return n_points / 2; }

    double operator[](int i) const { return points[static_cast<size_t>(i)]; }

    bool same_layout(const Grid& o) const {
        return n_points == o.n_points && x0() == o.x0() && x1() == o.x1();
    }
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr build_grid(double a, double b, int n_points,
                          bool open_left, bool open_right, double margin = 0.0) {
    if (!(a < b)) throw GridError("invalid interval: a >= b");
    if (n_points < 16) throw GridError("need at least 16 points");
    if ((open_left || open_right) && !(margin > 0.0))
        throw GridError("open endpoint requires a positive margin");
    if ((open_left || open_right) && margin >= 0.5 * (b - a))
        throw GridError("margin >= (b-a)/2");

    auto g = std::make_shared<Grid>();
    g->a = a;
    g->b = b;
    g->n_points = n_points;
    g->open_left = open_left;
    g->open_right = open_right;
    g->margin = margin;

    const double lo = open_left ? a + margin : a;
    const double hi = open_right ? b - margin : b;
    g->points.resize(static_cast<size_t>(n_points));
    const double h = (hi - lo) / (n_points - 1);
    for (int i = 0; i < n_points; ++i)
        g->points[static_cast<size_t>(i)] = lo + h * i;
    g->points.back() = hi;
    return g;
}

/// Default open-endpoint margin: 1e-6 of the interval length.
inline double default_margin(double a, double b) { return 1e-6 * (b - a); }

} // namespace csusy
