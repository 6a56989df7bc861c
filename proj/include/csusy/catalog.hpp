#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "csusy/chain.hpp"
#include "csusy/dirac.hpp"
#include "csusy/specfun.hpp"
#include "csusy/transform.hpp"

namespace csusy {

/// A worked system with closed-form parametrizing function, potential,
/// spectrum and eigenfunctions, used as ground truth by the tests.
struct ModelSystem {
    std::string name;
    double m = 1.0;
    GridPtr grid;
    SampledFunction U0; // sampled with first and second derivatives

    std::function<double(double)> q0_fn;
    std::function<double(double)> dq0_fn;
    std::function<double(double)> U0_fn;
    std::function<double(int)> epsilon_n;
    std::function<double(int)> abs_E_n;
    std::function<SampledFunction(int)> psi1; // carries its ODE context
    std::function<SampledFunction(int)> psi2; // printed closed form

    // system parameters (coulomb: ell; oscillator: A, c1, c2)
    int ell = 0;
    double A = 0.0, c1 = 1.0, c2 = 0.0;

    PseudoscalarPotential V0() const {
        PseudoscalarPotential v;
        v.m = m;
        v.q = sample(grid, q0_fn, dq0_fn);
        v.label = name;
        return v;
    }
};

namespace detail {

inline SampledFunction shifted_coeff(const SampledFunction& U0, double eps) {
    SampledFunction c = U0;
    for (auto& t : c.v) t -= eps;
    c.ode.reset();
    return c;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Coulomb-type system on (0, infinity), truncated on the right.

inline ModelSystem coulomb_system(int ell, double m, int n_max = 3,
                                  int n_points = 24001) {
    if (ell < 1) throw ConfigError("coulomb: ell must be >= 1");
    ModelSystem sys;
    sys.name = "coulomb";
    sys.m = m;
    sys.ell = ell;
    // Twice the e^{-x/(n+l+1)} tail estimate: weakly bound states keep a
    // slowly decaying tail well past their classical turning point, and the
    // cut must sit several WKB e-folds beyond it for 1e-6 eigenvalues.
    const double b = 24.0 * (n_max + ell + 1);
    sys.grid = build_grid(0.0, b, n_points, true, false, default_margin(0.0, b));

    const double l = ell;
    sys.q0_fn = [l](double x) { return 1.0 / l - l / x; };
    sys.dq0_fn = [l](double x) { return l / (x * x); };
    sys.U0_fn = [l](double x) { return l * (l + 1.0) / (x * x) - 2.0 / x + 1.0 / (l * l); };
    auto dU0 = [l](double x) { return -2.0 * l * (l + 1.0) / (x * x * x) + 2.0 / (x * x); };
    auto d2U0 = [l](double x) {
        return 6.0 * l * (l + 1.0) / (x * x * x * x) - 4.0 / (x * x * x);
    };
    sys.U0 = sample(sys.grid, sys.U0_fn, dU0, d2U0);

    sys.epsilon_n = [l](int n) {
        return 1.0 / (l * l) - 1.0 / ((1.0 + l + n) * (1.0 + l + n));
    };
    sys.abs_E_n = [sys_m = m, eps = sys.epsilon_n](int n) {
        return std::sqrt(sys_m * sys_m + eps(n));
    };

    GridPtr g = sys.grid;
    SampledFunction U0s = sys.U0;
    auto eps_fn = sys.epsilon_n;
    sys.psi1 = [g, U0s, eps_fn, ell](int n) {
        const double k = n + ell + 1;
        auto val = [=](double x) {
            return std::pow(x, ell + 1) * std::exp(-x / k) *
                   laguerre(n, 2 * ell + 1, 2.0 * x / k);
        };
        auto der = [=](double x) {
            const double lag = laguerre(n, 2 * ell + 1, 2.0 * x / k);
            const double lag1 = n > 0 ? laguerre(n - 1, 2 * ell + 2, 2.0 * x / k) : 0.0;
            return std::pow(x, ell + 1) * std::exp(-x / k) *
                   (((ell + 1) / x - 1.0 / k) * lag - (2.0 / k) * lag1);
        };
        SampledFunction f = sample(g, val, der);
        attach_ode(f, detail::shifted_coeff(U0s, eps_fn(n)));
        return f;
    };
    auto q0 = sys.q0_fn;
    auto dq0 = sys.dq0_fn;
    auto U0_fn = sys.U0_fn;
    sys.psi2 = [g, sys_m = m, absE = sys.abs_E_n, eps_fn, q0, dq0, U0_fn, ell](int n) {
        const double k = n + ell + 1;
        const double E = absE(n);
        auto val = [=](double x) {
            const double y = 2.0 * x / k;
            const double lag = laguerre(n, 2 * ell + 1, y);
            const double lag1 = n > 0 ? laguerre(n - 1, 2 * ell + 2, y) : 0.0;
            return std::pow(x, ell) / (E + sys_m) * std::exp(-x / k) *
                   (y * lag1 + (-2.0 * ell - 1.0 + (n + 2.0 * ell + 1.0) * x / (ell * k)) * lag);
        };
        // derivative through the component relation; the printed form above
        // is the same function in expanded shape
        auto der = [=](double x) {
            const double lag = laguerre(n, 2 * ell + 1, 2.0 * x / k);
            const double lag1 = n > 0 ? laguerre(n - 1, 2 * ell + 2, 2.0 * x / k) : 0.0;
            const double p1 = std::pow(x, ell + 1) * std::exp(-x / k) * lag;
            const double dp1 = std::pow(x, ell + 1) * std::exp(-x / k) *
                               (((ell + 1) / x - 1.0 / k) * lag - (2.0 / k) * lag1);
            const double d2p1 = (U0_fn(x) - eps_fn(n)) * p1;
            return (dq0(x) * p1 + q0(x) * dp1 - d2p1) / (E + sys_m);
        };
        return sample(g, val, der);
    };
    return sys;
}

struct DeletionSetup {
    JordanChain chain;
    double w0 = 0.0; // Wronskian value at the first grid point
};

/// Order-2 chain deleting the level n0: u0 = psi1(n0), u1 by nested
/// quadrature, constants fixed so that the Wronskian's only zero sits at the
/// (unsampled) origin.
inline DeletionSetup coulomb_deletion_setup(const ModelSystem& sys, int n0) {
    SampledFunction u0 = sys.psi1(n0);
    const double lambda = sys.epsilon_n(n0);
    const double x0 = sys.grid->x0();
    // integral of u0^2 over (0, x0): u0^2 ~ x^{2l+2} with a slowly varying factor
    const double u00 = u0.v.front();
    const double tail = u00 * u00 * x0 / (2.0 * sys.ell + 3.0);

    ChainIntegralOptions opt;
    opt.inner_anchor = 0;
    opt.inner_constants = {tail};
    // Anchor the outer integral where u0 peaks: anchoring in the exponential
    // tail would add an enormous multiple of u0 to u1 and wreck the Wronskian
    // cancellation.
    int peak = 0;
    for (int i = 0; i < u0.n(); ++i)
        if (std::abs(u0.v[static_cast<size_t>(i)]) >
            std::abs(u0.v[static_cast<size_t>(peak)]))
            peak = i;
    opt.outer_anchor = peak;
    DeletionSetup out;
    out.chain = chain_from_u0_integral(u0, sys.U0, lambda, 2, opt);
    out.w0 = -tail;
    return out;
}

// ---------------------------------------------------------------------------
// Shifted harmonic oscillator on the real line.

namespace detail {

/// Even/odd basis pieces of the oscillator solution at a given energy;
/// a1 = (1-eps-A)/4, a2 = a1 + 1/2.
struct OscSolution {
    double a1, a2, c2;
};

/// Value and derivative of exp(-x^2/2)[M(a1,1/2,x^2) + c2 x M(a2,3/2,x^2)].
/// For x << 0 the direct sum cancels catastrophically, so the equivalent
/// Tricomi-function branch is used there.
inline void osc_eval(const OscSolution& p, double x, double& v, double& d) {
    const double z = x * x;
    const double e = std::exp(-0.5 * z);
    if (x < -4.5 && p.c2 != 0.0) {
        const double pref = gamma_fn(p.a2) / std::sqrt(M_PI);
        const double u = kummer_u_asymptotic(p.a1, 0.5, z);
        const double u1 = kummer_u_asymptotic(p.a1 + 1.0, 1.5, z);
        v = pref * e * u;
        d = pref * e * x * (-u - 2.0 * p.a1 * u1);
        return;
    }
    const double m1 = hyp1f1(p.a1, 0.5, z);
    const double m2 = hyp1f1(p.a2, 1.5, z);
    const double m1p = hyp1f1(p.a1 + 1.0, 1.5, z);
    const double m2p = hyp1f1(p.a2 + 1.0, 2.5, z);
    v = e * (m1 + p.c2 * x * m2);
    d = e * (-x * (m1 + p.c2 * x * m2) + 4.0 * p.a1 * x * m1p +
             p.c2 * (m2 + (4.0 * p.a2 / 3.0) * z * m2p));
}

} // namespace detail

inline ModelSystem oscillator_system(double A, double c1, double c2, double m,
                                     int n_points = 4001) {
    ModelSystem sys;
    sys.name = "oscillator";
    sys.m = m;
    sys.A = A;
    sys.c1 = c1;
    sys.c2 = c2;
    sys.grid = build_grid(-8.0, 8.0, n_points, false, false);

    const double a = (1.0 - A) / 4.0;
    sys.q0_fn = [a](double x) {
        const double z = x * x;
        const double f = hyp1f1(a, 0.5, z);
        const double fp = 4.0 * a * x * hyp1f1(a + 1.0, 1.5, z);
        return -x + fp / f;
    };
    sys.dq0_fn = [a](double x) {
        const double z = x * x;
        const double f = hyp1f1(a, 0.5, z);
        const double fp = 4.0 * a * x * hyp1f1(a + 1.0, 1.5, z);
        const double fpp = 4.0 * a * hyp1f1(a + 1.0, 1.5, z) +
                           (16.0 * a * (a + 1.0) / 3.0) * z * hyp1f1(a + 2.0, 2.5, z);
        const double g = fp / f;
        return -1.0 + fpp / f - g * g;
    };
    sys.U0_fn = [A](double x) { return x * x - A; };
    sys.U0 = sample(sys.grid, sys.U0_fn, [](double x) { return 2.0 * x; },
                    [](double) { return 2.0; });

    sys.epsilon_n = [A](int n) { return 2.0 * n + 1.0 - A; };
    sys.abs_E_n = [m, A](int n) { return std::sqrt(2.0 * n + 1.0 - A + m * m); };

    GridPtr g = sys.grid;
    SampledFunction U0s = sys.U0;
    auto eps_fn = sys.epsilon_n;
    sys.psi1 = [g, U0s, eps_fn](int n) {
        auto val = [n](double x) { return std::exp(-0.5 * x * x) * hermite(n, x); };
        auto der = [n](double x) {
            const double hp = n > 0 ? 2.0 * n * hermite(n - 1, x) : 0.0;
            return std::exp(-0.5 * x * x) * (hp - x * hermite(n, x));
        };
        SampledFunction f = sample(g, val, der);
        attach_ode(f, detail::shifted_coeff(U0s, eps_fn(n)));
        return f;
    };
    auto q0 = sys.q0_fn;
    auto dq0 = sys.dq0_fn;
    auto U0_fn = sys.U0_fn;
    sys.psi2 = [g, m, q0, dq0, U0_fn, eps_fn, absE = sys.abs_E_n](int n) {
        const double E = absE(n);
        auto p1 = [n](double x) { return std::exp(-0.5 * x * x) * hermite(n, x); };
        auto dp1 = [n](double x) {
            const double hp = n > 0 ? 2.0 * n * hermite(n - 1, x) : 0.0;
            return std::exp(-0.5 * x * x) * (hp - x * hermite(n, x));
        };
        auto val = [=](double x) { return (q0(x) * p1(x) - dp1(x)) / (E + m); };
        auto der = [=](double x) {
            const double d2p1 = (U0_fn(x) - eps_fn(n)) * p1(x);
            return (dq0(x) * p1(x) + q0(x) * dp1(x) - d2p1) / (E + m);
        };
        return sample(g, val, der);
    };
    return sys;
}

/// One-parameter solution family for the lambda-derivative chain: the
/// combination that vanishes at negative infinity, c2 = 2 Gamma(a2)/Gamma(a1).
inline std::function<SampledFunction(double)>
oscillator_u0_family(const ModelSystem& sys) {
    GridPtr g = sys.grid;
    const double A = sys.A;
    return [g, A](double lambda) {
        detail::OscSolution p;
        p.a1 = (1.0 - lambda - A) / 4.0;
        p.a2 = p.a1 + 0.5;
        p.c2 = 2.0 * gamma_fn(p.a2) / gamma_fn(p.a1);
        SampledFunction f = make_sampled(g);
        for (int i = 0; i < g->n_points; ++i) {
            double v, d;
            detail::osc_eval(p, (*g)[i], v, d);
            f.v[static_cast<size_t>(i)] = v;
            f.d[static_cast<size_t>(i)] = d;
        }
        return f;
    };
}

inline JordanChain oscillator_insertion_setup(const ModelSystem& sys,
                                              double lambda, double B) {
    return chain_from_lambda_derivative(oscillator_u0_family(sys), sys.U0, lambda, B);
}

/// Zero-energy solution of the base oscillator (A = -5, even branch) in
/// closed form: exp(x^2/2)(2x^2+1).
inline SampledFunction oscillator_zero_energy_base(GridPtr g) {
    auto val = [](double x) { return std::exp(0.5 * x * x) * (2.0 * x * x + 1.0); };
    auto der = [](double x) {
        return std::exp(0.5 * x * x) * x * (2.0 * x * x + 5.0);
    };
    return sample(std::move(g), val, der);
}

// ---------------------------------------------------------------------------
// Trigonometric system on (0, pi/2).

inline ModelSystem trig_system(double m, int n_points = 12001) {
    ModelSystem sys;
    sys.name = "trig";
    sys.m = m;
    const double b = M_PI / 2.0;
    sys.grid = build_grid(0.0, b, n_points, true, true, default_margin(0.0, b));

    sys.q0_fn = [](double x) { return 2.0 * std::tan(x) + 2.0 / std::tan(x); };
    sys.dq0_fn = [](double x) {
        const double sec2 = 1.0 / (std::cos(x) * std::cos(x));
        const double csc2 = 1.0 / (std::sin(x) * std::sin(x));
        return 2.0 * sec2 - 2.0 * csc2;
    };
    sys.U0_fn = [](double x) {
        const double t = std::tan(x);
        return 6.0 * t * t + 2.0 / (t * t) + 8.0;
    };
    auto dU0 = [](double x) {
        const double t = std::tan(x), c = 1.0 / t;
        const double sec2 = 1.0 + t * t, csc2 = 1.0 + c * c;
        return 12.0 * t * sec2 - 4.0 * c * csc2;
    };
    auto d2U0 = [](double x) {
        const double t = std::tan(x), c = 1.0 / t;
        const double sec2 = 1.0 + t * t, csc2 = 1.0 + c * c;
        return 12.0 * (sec2 * sec2 + 2.0 * t * t * sec2) +
               4.0 * (csc2 * csc2 + 2.0 * c * c * csc2);
    };
    sys.U0 = sample(sys.grid, sys.U0_fn, dU0, d2U0);

    sys.epsilon_n = [](int n) { return (2.0 * n + 5.0) * (2.0 * n + 5.0); };
    sys.abs_E_n = [m](int n) {
        return std::sqrt((2.0 * n + 5.0) * (2.0 * n + 5.0) + m * m);
    };

    GridPtr g = sys.grid;
    SampledFunction U0s = sys.U0;
    auto eps_fn = sys.epsilon_n;
    sys.psi1 = [g, U0s, eps_fn](int n) {
        auto val = [n](double x) {
            const double c = std::cos(x), s = std::sin(x);
            return c * c * c * s * s * hyp2f1_poly(n, n + 5.0, 2.5, s * s);
        };
        auto der = [n](double x) {
            const double c = std::cos(x), s = std::sin(x);
            const double F = hyp2f1_poly(n, n + 5.0, 2.5, s * s);
            const double Fs = n > 0 ? -(2.0 * n * (n + 5.0) / 5.0) *
                                          hyp2f1_poly(n - 1, n + 6.0, 3.5, s * s)
                                    : 0.0;
            return (2.0 * c * c * c * c * s - 3.0 * c * c * s * s * s) * F +
                   c * c * c * s * s * Fs * 2.0 * s * c;
        };
        SampledFunction f = sample(g, val, der);
        attach_ode(f, detail::shifted_coeff(U0s, eps_fn(n)));
        return f;
    };
    sys.psi2 = [g, m, absE = sys.abs_E_n](int n) {
        const double E = absE(n);
        auto val = [=](double x) {
            const double c = std::cos(x), s = std::sin(x);
            const double s2 = s * s;
            double t1 = 0.0;
            if (n >= 1)
                t1 = 4.0 * n * (n + 5.0) * c * c * c * c * s * s * s /
                     (5.0 * m + 5.0 * E) * hyp2f1_poly(n - 1, n + 6.0, 3.5, s2);
            const double t2 = 5.0 * c * c * s * s * s / (m + E) *
                              hyp2f1_poly(n, n + 5.0, 2.5, s2);
            return t1 + t2;
        };
        auto der = [=](double x) {
            const double c = std::cos(x), s = std::sin(x);
            const double s2 = s * s;
            double r = 0.0;
            if (n >= 1) {
                const double a1 = 4.0 * n * (n + 5.0) / (5.0 * m + 5.0 * E);
                const double G = hyp2f1_poly(n - 1, n + 6.0, 3.5, s2);
                const double Gs = n >= 2 ? -(2.0 * (n - 1.0) * (n + 6.0) / 7.0) *
                                               hyp2f1_poly(n - 2, n + 7.0, 4.5, s2)
                                         : 0.0;
                r += a1 * ((3.0 * c * c * c * c * c * s * s -
                            4.0 * c * c * c * s * s * s * s) * G +
                           c * c * c * c * s * s * s * Gs * 2.0 * s * c);
            }
            const double a2 = 5.0 / (m + E);
            const double F = hyp2f1_poly(n, n + 5.0, 2.5, s2);
            const double Fs = n > 0 ? -(2.0 * n * (n + 5.0) / 5.0) *
                                          hyp2f1_poly(n - 1, n + 6.0, 3.5, s2)
                                    : 0.0;
            r += a2 * ((3.0 * c * c * c * s * s - 2.0 * c * s * s * s * s) * F +
                       c * c * s * s * s * Fs * 2.0 * s * c);
            return r;
        };
        return sample(g, val, der);
    };
    return sys;
}

/// Closed-form chain members of the order-3 trigonometric transformation,
/// expressed in this library's sign convention (u_j'' = (U0-25)u_j - u_{j-1}).
inline double trig_u1_reference(double x) {
    const double c = std::cos(x), s = std::sin(x);
    const double num = 4.0 * x * (std::cos(8.0 * x) + 2.0 * std::cos(6.0 * x) -
                                  2.0 * std::cos(4.0 * x) - 6.0 * std::cos(2.0 * x)) -
                       std::sin(6.0 * x) + std::sin(4.0 * x) + 11.0 * std::sin(2.0 * x);
    return -num / (5120.0 * c * c * s);
}

inline double trig_u2_reference(double x) {
    const double c = std::cos(x), s = std::sin(x);
    const double part1 = (51.0 * x - 2560.0) * std::tan(x) / (256000.0 * c);
    const double part2 =
        (6.0 * c * (80.0 * x * x * std::cos(4.0 * x) - 14.0 * std::cos(2.0 * x) -
                    80.0 * x * x + 21.0) +
         5.0 * (-39.0 * x + 2560.0) / s + 153.0 / c -
         8.0 * (21.0 * x - 2560.0) * (std::sin(3.0 * x) - 2.0 * std::sin(x)) +
         16.0 * (-3.0 * x + 1280.0) * std::sin(5.0 * x)) /
        768000.0;
    return part1 + part2;
}

struct TrigChainSetup {
    JordanChain chain;
    std::function<double(double)> u1_reference = trig_u1_reference;
    std::function<double(double)> u2_reference = trig_u2_reference;
};

/// Order-3 chain at lambda = 25 built numerically; the integration constants
/// are pinned so that the members coincide with the closed forms above
/// (inner constant 1/20 for u2, outer constants matched at x = pi/4).
inline TrigChainSetup trig_third_order_setup(const ModelSystem& sys) {
    SampledFunction u0 = sys.psi1(0);
    const double lambda = 25.0;
    const int mid = sys.grid->mid();
    const double xm = (*sys.grid)[mid]; // pi/4 by symmetry of the margins
    const double u0m = u0.v[static_cast<size_t>(mid)];

    const double x0 = sys.grid->x0();
    const double u00 = u0.v.front();
    const double tail = u00 * u00 * x0 / 5.0; // int of u0^2 over (0, x0)

    ChainIntegralOptions opt;
    opt.inner_anchor = 0;
    opt.inner_constants = {tail, 1.0 / 20.0};
    opt.outer_anchor = mid;
    opt.outer_constants = {-trig_u1_reference(xm) / u0m,
                           -trig_u2_reference(xm) / u0m};

    TrigChainSetup out;
    out.chain = chain_from_u0_integral(u0, sys.U0, lambda, 3, opt);

    // u0 ~ x^2 at the left wall and ~ (pi/2 - x)^3 at the right one, so the
    // 1/u0^2 integrand of the nested quadrature steepens beyond what the
    // trapezoid rule resolves within a few steps of either wall. Trim the
    // higher members where |u0| changes by more than 2x per step.
    int lo = u0.lo(), hi = u0.hi();
    while (lo < mid && std::abs(u0.v[static_cast<size_t>(lo) + 1]) >
                           2.0 * std::abs(u0.v[static_cast<size_t>(lo)]))
        ++lo;
    while (hi > mid && std::abs(u0.v[static_cast<size_t>(hi) - 1]) >
                           2.0 * std::abs(u0.v[static_cast<size_t>(hi)]))
        --hi;
    for (size_t j = 1; j < out.chain.members.size(); ++j) {
        out.chain.members[j].valid_lo = lo;
        out.chain.members[j].valid_hi = hi;
    }
    return out;
}

} // namespace csusy
