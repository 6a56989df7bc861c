#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "csusy/ode.hpp"
#include "csusy/quadrature.hpp"
#include "csusy/sampled.hpp"

namespace csusy {

/// Jordan chain at factorization energy lambda:
///     u_0'' = (U0 - lambda) u_0,
///     u_j'' = (U0 - lambda) u_j - u_{j-1},   j = 1..N-1.
/// Every member carries an ODE context, so Wronskian rows of derivative
/// order >= 2 reduce exactly.
struct JordanChain {
    double lambda = 0.0;
    int order = 0;
    std::vector<SampledFunction> members;
    SampledFunction coeff; // U0 - lambda, shared by all members
};

namespace detail {

inline void require_interior_nonzero(const SampledFunction& u0) {
    for (int i = u0.lo() + 1; i < u0.hi(); ++i) {
        const double a = u0.v[static_cast<size_t>(i)];
        const double b = u0.v[static_cast<size_t>(i) + 1];
        if (a == 0.0 || (a > 0.0) != (b > 0.0))
            throw SingularChainError("u0 vanishes", (*u0.grid)[i]);
    }
}

inline SampledFunction coeff_minus_lambda(const SampledFunction& U0, double lambda) {
    SampledFunction c = U0;
    for (auto& t : c.v) t -= lambda;
    c.ode.reset();
    return c;
}

} // namespace detail

struct ChainIntegralOptions {
    int inner_anchor = 0;                 // anchor index of the inner integral
    int outer_anchor = -1;                // default: grid midpoint
    std::vector<double> inner_constants;  // added to the inner integral, per j >= 1
    std::vector<double> outer_constants;  // added to the outer integral, per j >= 1
    std::optional<SampledFunction> u_hat; // defaults to zero
};

/// Build an order-N chain from u0 by nested quadrature:
///     u_j = u_hat - u0 * G_j,   G_j(x) = k_out + int_xo^x (k_in + int_xi^t u0 u_{j-1} ds) / u0^2 dt.
/// Direct differentiation shows u_j'' = (U0-lambda) u_j - u_{j-1} regardless of
/// the anchors and constants, which only fix the two homogeneous freedoms.
inline JordanChain chain_from_u0_integral(const SampledFunction& u0,
                                          const SampledFunction& U0,
                                          double lambda, int order,
                                          const ChainIntegralOptions& opt = {}) {
    if (order < 2) throw Error("chain: order must be >= 2");
    detail::require_interior_nonzero(u0);

    JordanChain ch;
    ch.lambda = lambda;
    ch.order = order;
    ch.coeff = detail::coeff_minus_lambda(U0, lambda);

    const int n = u0.n();
    const int outer_anchor = opt.outer_anchor < 0 ? u0.grid->mid() : opt.outer_anchor;

    SampledFunction first = u0;
    attach_ode(first, ch.coeff);
    ch.members.push_back(std::move(first));

    for (int j = 1; j < order; ++j) {
        const SampledFunction& prev = ch.members.back();
        const double k_in = j - 1 < static_cast<int>(opt.inner_constants.size())
                                ? opt.inner_constants[static_cast<size_t>(j - 1)] : 0.0;
        const double k_out = j - 1 < static_cast<int>(opt.outer_constants.size())
                                 ? opt.outer_constants[static_cast<size_t>(j - 1)] : 0.0;

        std::vector<double> prod(static_cast<size_t>(n));
        for (size_t i = 0; i < prod.size(); ++i) prod[i] = u0.v[i] * prev.v[i];
        std::vector<double> inner = cumulative(prod, u0.grid, opt.inner_anchor);
        for (auto& t : inner) t += k_in;

        std::vector<double> ratio(static_cast<size_t>(n));
        for (size_t i = 0; i < ratio.size(); ++i) ratio[i] = inner[i] / (u0.v[i] * u0.v[i]);
        std::vector<double> outer = cumulative(ratio, u0.grid, outer_anchor);
        for (auto& t : outer) t += k_out;

        SampledFunction uj = make_sampled(u0.grid);
        for (size_t i = 0; i < uj.v.size(); ++i) {
            uj.v[i] = -u0.v[i] * outer[i];
            uj.d[i] = -u0.d[i] * outer[i] - u0.v[i] * ratio[i];
        }
        if (opt.u_hat) {
            for (size_t i = 0; i < uj.v.size(); ++i) {
                uj.v[i] += opt.u_hat->v[i];
                uj.d[i] += opt.u_hat->d[i];
            }
        }
        uj.valid_lo = prev.lo();
        uj.valid_hi = prev.valid_hi;
        attach_ode(uj, ch.coeff, prev, -1.0);
        ch.members.push_back(std::move(uj));
    }
    return ch;
}

namespace detail {

inline bool interior_nonzero(const SampledFunction& u0) {
    for (int i = u0.lo() + 1; i < u0.hi(); ++i) {
        const double a = u0.v[static_cast<size_t>(i)];
        const double b = u0.v[static_cast<size_t>(i) + 1];
        if (a == 0.0 || (a > 0.0) != (b > 0.0)) return false;
    }
    return true;
}

} // namespace detail

/// Second linearly independent solution with W(u0, v0) = 1 by reduction of
/// order: v0 = u0 * int_anchor^x dt/u0^2, with the derivative assembled as
/// u0'*Q + 1/u0 so the unit Wronskian holds pointwise to rounding. Quadrature
/// error in Q only shifts v0 by a multiple of u0. When u0 has interior zeros
/// (v0 itself stays regular there, but the quadrature does not), v0 is
/// integrated from the same equation with unit-Wronskian initial data
/// instead.
inline SampledFunction partner_solution_v0(const SampledFunction& u0, int anchor = -1) {
    if (!u0.ode) throw Error("partner_solution_v0: u0 needs its ODE context");
    if (!detail::interior_nonzero(u0)) {
        int a = u0.lo();
        for (int i = u0.lo(); i <= u0.hi(); ++i)
            if (std::abs(u0.v[static_cast<size_t>(i)]) >
                std::abs(u0.v[static_cast<size_t>(a)]))
                a = i;
        if (anchor >= 0) a = anchor;
        if (u0.v[static_cast<size_t>(a)] == 0.0)
            throw SingularChainError("v0 anchor on a zero of u0", (*u0.grid)[a]);
        return solve_linear_ode2(u0.ode->coeff, nullptr, 0.0,
                                 1.0 / u0.v[static_cast<size_t>(a)], a);
    }
    if (anchor < 0) {
        // Anchor where |u0| peaks: anchoring in a decaying tail makes the
        // running integral a huge constant whose rounding swamps the
        // x-dependence that carries the second solution.
        anchor = u0.lo();
        for (int i = u0.lo(); i <= u0.hi(); ++i)
            if (std::abs(u0.v[static_cast<size_t>(i)]) >
                std::abs(u0.v[static_cast<size_t>(anchor)]))
                anchor = i;
    }

    std::vector<double> inv(u0.v.size(), 0.0);
    for (size_t i = 0; i < inv.size(); ++i)
        if (u0.v[i] != 0.0) inv[i] = 1.0 / (u0.v[i] * u0.v[i]);
    std::vector<double> q = cumulative(inv, u0.grid, anchor);

    SampledFunction v0 = make_sampled(u0.grid);
    for (size_t i = 0; i < v0.v.size(); ++i) {
        v0.v[i] = u0.v[i] * q[i];
        v0.d[i] = u0.v[i] != 0.0 ? u0.d[i] * q[i] + 1.0 / u0.v[i] : 0.0;
    }
    v0.valid_lo = u0.valid_lo;
    v0.valid_hi = u0.valid_hi;
    attach_ode(v0, u0.ode->coeff);
    return v0;
}

struct LambdaChainOptions {
    double h = 0.0; // 0 -> 1e-4 * max(1, |lambda|)
    bool richardson = false;
};

/// Order-2 chain with u1 = u0 + B*v0 + du0/dlambda, the lambda-derivative
/// taken by central difference over the supplied one-parameter family.
inline JordanChain chain_from_lambda_derivative(
    const std::function<SampledFunction(double)>& family,
    const SampledFunction& U0, double lambda, double B,
    const LambdaChainOptions& opt = {}) {
    const double h = opt.h > 0.0 ? opt.h : 1e-4 * std::max(1.0, std::abs(lambda));

    JordanChain ch;
    ch.lambda = lambda;
    ch.order = 2;
    ch.coeff = detail::coeff_minus_lambda(U0, lambda);

    SampledFunction u0 = family(lambda);
    attach_ode(u0, ch.coeff);

    auto central = [&](double step) {
        SampledFunction up = family(lambda + step);
        SampledFunction um = family(lambda - step);
        return fn_add(up, um, 0.5 / step, -0.5 / step);
    };
    SampledFunction dlam = central(h);
    if (opt.richardson) {
        SampledFunction coarse = central(2.0 * h);
        dlam = fn_add(dlam, coarse, 4.0 / 3.0, -1.0 / 3.0);
    }

    SampledFunction v0 = partner_solution_v0(u0);
    SampledFunction u1 = fn_add(fn_add(u0, v0, 1.0, B), dlam);
    attach_ode(u1, ch.coeff, u0, -1.0);

    ch.members.push_back(std::move(u0));
    ch.members.push_back(std::move(u1));
    return ch;
}

} // namespace csusy
