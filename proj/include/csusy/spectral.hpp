#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "csusy/dirac.hpp"
#include "csusy/ode.hpp"
#include "csusy/transform.hpp"

namespace csusy {

struct ShootOptions {
    double tau_shoot = 1e-8;
    int scan_steps = 400;
    double stiff_limit = 0.09; // h^2 |U - eps| above this is skipped at ends
    int max_states = 16;
};

namespace detail {

/// Limit of d^2 (U - eps) at an endpoint, estimated at the closest sample;
/// positive values signal an inverse-square singularity with regular-branch
/// exponent s = (1 + sqrt(1+4L))/2.
inline double endpoint_strength(const SampledFunction& U, double eps, bool left) {
    const Grid& g = *U.grid;
    const int i = left ? U.lo() : U.hi();
    const double d = left ? g[i] - g.a : g.b - g[i];
    return (U.v[static_cast<size_t>(i)] - eps) * d * d;
}

struct ShootSide {
    int start = 0;        // first index integrated
    double s = 0.0;       // power-law exponent, 0 for a regular Dirichlet end
};

inline ShootSide side_setup(const SampledFunction& U, double eps, bool left,
                            const ShootOptions& opt) {
    const Grid& g = *U.grid;
    const double h = g.h();
    ShootSide side;
    int i = left ? U.lo() : U.hi();
    const int stop = left ? U.hi() : U.lo();
    while (i != stop &&
           h * h * std::abs(U.v[static_cast<size_t>(i)] - eps) > opt.stiff_limit)
        i += left ? 1 : -1;
    side.start = i;
    const double L = endpoint_strength(U, eps, left);
    if ((left ? g.open_left : g.open_right) && L > 0.25)
        side.s = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * L));
    return side;
}

/// March y'' = (U - eps) y from index `from` to `to` inclusive, storing
/// values; returns false on non-finite state.
inline bool march(const std::function<double(double)>& c, const Grid& g,
                  int from, int to, double y, double p,
                  std::vector<double>* values, double& y_out, double& p_out) {
    const int dir = to >= from ? 1 : -1;
    const double h = dir * g.h();
    if (values) (*values).push_back(y);
    for (int i = from; i != to; i += dir) {
        rk4_step(c, nullptr, g[i], h, y, p);
        if (!std::isfinite(y) || !std::isfinite(p)) return false;
        if (values) values->push_back(y);
    }
    y_out = y;
    p_out = p;
    return true;
}

struct MatchState {
    double mismatch = 0.0;
    bool ok = false;
};

inline MatchState mismatch_at(const SampledFunction& U, double eps, int mid,
                              const ShootOptions& opt,
                              std::vector<double>* left_vals = nullptr,
                              std::vector<double>* right_vals = nullptr) {
    const Grid& g = *U.grid;
    auto c = [&U, eps](double x) { return value_at(U, x) - eps; };
    MatchState st;

    const ShootSide L = side_setup(U, eps, true, opt);
    const ShootSide R = side_setup(U, eps, false, opt);
    if (L.start >= mid || R.start <= mid) return st;

    double yL, pL, yR, pR;
    {
        double y = 0.0, p = 1.0;
        if (L.s > 0.0) {
            const double d = g[L.start] - g.a;
            y = std::pow(d, L.s);
            p = L.s * std::pow(d, L.s - 1.0);
        }
        if (!march(c, g, L.start, mid, y, p, left_vals, yL, pL)) return st;
    }
    {
        double y = 0.0, p = -1.0;
        if (R.s > 0.0) {
            const double d = g.b - g[R.start];
            y = std::pow(d, R.s);
            p = -R.s * std::pow(d, R.s - 1.0);
        }
        if (!march(c, g, R.start, mid, y, p, right_vals, yR, pR)) return st;
    }
    const double num = pL * yR - pR * yL;
    const double den = std::abs(yL * pR) + std::abs(yR * pL) +
                       std::abs(yL * yR) + std::abs(pL * pR) + 1e-300;
    st.mismatch = num / den;
    st.ok = true;
    return st;
}

} // namespace detail

struct EigenEntry {
    double epsilon = 0.0;
    int node_count = 0;
    bool normalizable = true;
};

struct SpectrumReport {
    std::string potential_label;
    std::vector<EigenEntry> eigenvalues;
    double window_lo = 0.0, window_hi = 0.0;
};

/// Two-sided matched eigenfunction at the given epsilon, rescaled to a
/// continuous join at the midpoint; entries outside the integrated range
/// stay zero with the valid range narrowed accordingly.
inline SampledFunction shoot_eigenfunction(const SampledFunction& U, double eps,
                                           const ShootOptions& opt = {}) {
    const int mid = U.grid->mid();
    std::vector<double> lv, rv;
    auto st = detail::mismatch_at(U, eps, mid, opt, &lv, &rv);
    if (!st.ok) throw Error("shoot_eigenfunction: integration failed");
    SampledFunction f = make_sampled(U.grid);
    const int lstart = mid - static_cast<int>(lv.size()) + 1;
    const int rstart = mid + static_cast<int>(rv.size()) - 1;
    for (size_t k = 0; k < lv.size(); ++k)
        f.v[static_cast<size_t>(lstart) + k] = lv[k];
    // Least-squares scale over value and slope at the junction: a pure value
    // ratio degenerates when the eigenfunction has a node at the match point.
    const double h = U.grid->h();
    const double le = lv.back(), lp = lv.size() > 1 ? (le - lv[lv.size() - 2]) / h : 0.0;
    const double re = rv.back(), rp = rv.size() > 1 ? (rv[rv.size() - 2] - re) / h : 0.0;
    const double den = re * re + rp * rp;
    const double scale = den != 0.0 ? (le * re + lp * rp) / den : 1.0;
    for (size_t k = 0; k < rv.size(); ++k)
        f.v[static_cast<size_t>(rstart) - k] = rv[k] * scale;
    f.valid_lo = lstart;
    f.valid_hi = rstart;
    if (f.valid_lo == 0 && f.valid_hi == f.n() - 1) f.valid_hi = -1;
    auto d = fd_derivative(f.v, f.grid->h());
    f.d = std::move(d);
    return f;
}

inline int count_nodes(const SampledFunction& f) {
    // Ignore flips whose amplitude is negligible against the peak: deep in an
    // exponential tail the marched solution crosses zero at <1e-6 of the peak
    // when epsilon is off by tau_shoot, which is noise, not a Sturm node.
    const double floor = 1e-5 * f.max_abs();
    int nodes = 0;
    for (int i = f.lo(); i < f.hi(); ++i) {
        const double a = f.v[static_cast<size_t>(i)];
        const double b = f.v[static_cast<size_t>(i) + 1];
        if (a != 0.0 && b != 0.0 && (a > 0.0) != (b > 0.0) &&
            std::max(std::abs(a), std::abs(b)) > floor)
            ++nodes;
    }
    return nodes;
}

/// Coarse scan of the matching mismatch over the window followed by bisection
/// on each sign change, refined to |delta eps| < tau_shoot.
inline SpectrumReport shoot_spectrum(const SampledFunction& U,
                                     std::pair<double, double> window,
                                     const ShootOptions& opt = {},
                                     const std::string& label = "") {
    SpectrumReport rep;
    rep.potential_label = label;
    rep.window_lo = window.first;
    rep.window_hi = window.second;
    const int mid = U.grid->mid();

    const int steps = opt.scan_steps;
    const double de = (window.second - window.first) / steps;
    double prev_eps = window.first;
    auto prev = detail::mismatch_at(U, prev_eps, mid, opt);
    for (int k = 1; k <= steps; ++k) {
        const double eps = window.first + k * de;
        auto cur = detail::mismatch_at(U, eps, mid, opt);
        if (prev.ok && cur.ok && prev.mismatch * cur.mismatch < 0.0) {
            double a = prev_eps, b = eps;
            double fa = prev.mismatch;
            while (b - a > opt.tau_shoot) {
                const double m = 0.5 * (a + b);
                auto fm = detail::mismatch_at(U, m, mid, opt);
                if (!fm.ok) break;
                if (fa * fm.mismatch <= 0.0) b = m;
                else {
                    a = m;
                    fa = fm.mismatch;
                }
            }
            EigenEntry e;
            e.epsilon = 0.5 * (a + b);
            SampledFunction f = shoot_eigenfunction(U, e.epsilon, opt);
            e.node_count = count_nodes(f);
            e.normalizable = decays_toward(f, true) && decays_toward(f, false);
            rep.eigenvalues.push_back(e);
            if (static_cast<int>(rep.eigenvalues.size()) >= opt.max_states) break;
        }
        prev = cur;
        prev_eps = eps;
    }
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
              [](const EigenEntry& a, const EigenEntry& b) { return a.epsilon < b.epsilon; });
    return rep;
}

struct DiffReport {
    std::vector<std::pair<double, double>> retained; // (before eps, matching after eps)
    std::vector<double> deleted;                     // before eps without a C-shifted match
    std::vector<double> inserted;                    // after eps with no before origin
};

/// Classify each before-eigenvalue against the after-spectrum shifted by C.
inline DiffReport compare_spectra(const SpectrumReport& before,
                                  const SpectrumReport& after, double C, double tol) {
    DiffReport diff;
    std::vector<bool> used(after.eigenvalues.size(), false);
    for (const auto& b : before.eigenvalues) {
        bool matched = false;
        for (size_t j = 0; j < after.eigenvalues.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(after.eigenvalues[j].epsilon - (b.epsilon + C)) <= tol) {
                used[j] = true;
                diff.retained.emplace_back(b.epsilon, after.eigenvalues[j].epsilon);
                matched = true;
                break;
            }
        }
        if (!matched) diff.deleted.push_back(b.epsilon);
    }
    for (size_t j = 0; j < after.eigenvalues.size(); ++j)
        if (!used[j]) diff.inserted.push_back(after.eigenvalues[j].epsilon);
    return diff;
}

struct RegularityReport {
    bool wronskian_nodeless = true;
    std::vector<double> wronskian_zero_xs;
    bool qhat_nodeless = true;
    std::vector<double> qhat_node_xs;
    std::string integral_boundedness; // above / below / both / neither
    double c_admissible_below = 0.0;  // admissible: c < below or c > above
    double c_admissible_above = 0.0;
    bool lambda_within_bound = true;  // lambda <= ground epsilon (order 3 requirement)
};

inline RegularityReport regularity_report(const TransformResult& tr,
                                          const SampledFunction& q_hat,
                                          double ground_epsilon) {
    RegularityReport rep;
    rep.wronskian_nodeless = tr.wron.nodeless_interior;
    for (int z : tr.wron.zero_locations)
        rep.wronskian_zero_xs.push_back((*tr.wron.w.grid)[z]);

    for (int i = q_hat.lo(); i < q_hat.hi(); ++i) {
        const double a = q_hat.v[static_cast<size_t>(i)];
        const double b = q_hat.v[static_cast<size_t>(i) + 1];
        if (a == 0.0 || (a > 0.0) != (b > 0.0)) {
            rep.qhat_nodeless = false;
            rep.qhat_node_xs.push_back((*q_hat.grid)[i]);
        }
    }

    std::vector<double> inv(q_hat.v.size(), 0.0);
    for (int i = q_hat.lo(); i <= q_hat.hi(); ++i)
        inv[static_cast<size_t>(i)] =
            1.0 / (q_hat.v[static_cast<size_t>(i)] * q_hat.v[static_cast<size_t>(i)]);
    std::vector<double> I = cumulative(inv, q_hat.grid, q_hat.grid->mid());
    double imin = I[static_cast<size_t>(q_hat.lo())], imax = imin;
    for (int i = q_hat.lo(); i <= q_hat.hi(); ++i) {
        imin = std::min(imin, I[static_cast<size_t>(i)]);
        imax = std::max(imax, I[static_cast<size_t>(i)]);
    }
    rep.c_admissible_below = -imax;
    rep.c_admissible_above = -imin;
    const bool fin_lo = std::isfinite(imin), fin_hi = std::isfinite(imax);
    rep.integral_boundedness = fin_lo && fin_hi ? "both"
                               : fin_hi         ? "above"
                               : fin_lo         ? "below"
                                                : "neither";
    rep.lambda_within_bound = tr.chain.lambda <= ground_epsilon + 1e-12;
    return rep;
}

/// Solution at the given energy that is recessive at one end: integrated
/// across the grid from the stiff-safe index nearest that end, seeded with
/// the endpoint's regular power-law (or Dirichlet) data. Useful for
/// zero-energy solutions of transformed potentials with singular ends.
inline SampledFunction recessive_solution(const SampledFunction& U, double eps,
                                          bool from_right,
                                          const ShootOptions& opt = {}) {
    const Grid& g = *U.grid;
    const detail::ShootSide side = detail::side_setup(U, eps, !from_right, opt);
    const detail::ShootSide other = detail::side_setup(U, eps, from_right, opt);
    auto c = [&U, eps](double x) { return value_at(U, x) - eps; };

    double y = 1.0, p = from_right ? -1.0 : 1.0;
    if (side.s > 0.0) {
        const double d = from_right ? g.b - g[side.start] : g[side.start] - g.a;
        y = std::pow(d, side.s);
        p = (from_right ? -1.0 : 1.0) * side.s * std::pow(d, side.s - 1.0);
    }

    SampledFunction f = make_sampled(U.grid);
    const int from = side.start;
    const int to = other.start;
    const int dir = from_right ? -1 : 1;
    const double h = dir * g.h();
    f.v[static_cast<size_t>(from)] = y;
    f.d[static_cast<size_t>(from)] = p;
    for (int i = from; i != to; i += dir) {
        detail::rk4_step(c, nullptr, g[i], h, y, p);
        if (!std::isfinite(y) || !std::isfinite(p))
            throw NonFiniteError("recessive_solution", g[i]);
        f.v[static_cast<size_t>(i + dir)] = y;
        f.d[static_cast<size_t>(i + dir)] = p;
    }
    f.valid_lo = std::min(from, to);
    f.valid_hi = std::max(from, to);
    if (f.valid_lo == 0 && f.valid_hi == f.n() - 1) f.valid_hi = -1;
    SampledFunction coeff = U;
    for (auto& t : coeff.v) t -= eps;
    coeff.ode.reset();
    attach_ode(f, std::move(coeff));
    return f;
}

/// Fit f ~ -a/x + b near the left endpoint by least squares on x*f(x) over
/// [x_lo, x_hi]; returns the pole coefficient a.
inline double leading_pole_coefficient(const SampledFunction& f, double x_lo, double x_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    const Grid& g = *f.grid;
    for (int i = f.lo(); i <= f.hi(); ++i) {
        const double x = g[i] - g.a;
        if (x < x_lo || x > x_hi) continue;
        const double y = x * f.v[static_cast<size_t>(i)];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 3) throw Error("leading_pole_coefficient: window too small");
    const double b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - b * sx) / m;
    return -intercept;
}

} // namespace csusy
