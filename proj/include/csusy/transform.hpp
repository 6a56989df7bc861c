#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "csusy/differentiate.hpp"
#include "csusy/wronskian.hpp"

namespace csusy {

struct TransformResult {
    JordanChain chain;
    SampledFunction U0;
    SampledFunction U1;
    double C = 0.0;
    WronskianData wron;
};

/// U1 = U0 - 2 (log|W|)'' + C, with W' and W'' taken from the exact
/// determinant identities of the chain.
inline TransformResult transform_potential(const JordanChain& chain,
                                           const SampledFunction& U0, double C,
                                           double tau_node = default_tau_node) {
    TransformResult tr;
    tr.chain = chain;
    tr.U0 = U0;
    tr.C = C;
    tr.wron = wronskian(chain, tau_node);
    if (!tr.wron.nodeless_interior) {
        std::string where;
        for (int z : tr.wron.zero_locations)
            where += " " + std::to_string((*tr.wron.w.grid)[z]);
        throw SingularWronskianError("interior zeros at" + where);
    }

    std::vector<const SampledFunction*> ms;
    for (const auto& m : chain.members) ms.push_back(&m);
    const auto base = detail::iota_orders(ms.size());

    const SampledFunction& w = tr.wron.w;
    tr.U1 = make_sampled(U0.grid);
    tr.U1.valid_lo = w.lo();
    tr.U1.valid_hi = w.valid_hi;
    const SampledFunction& u0 = chain.members.front();
    for (int i = w.lo(); i <= w.hi(); ++i) {
        const auto ui = static_cast<size_t>(i);
        // W'' from the exact N=2 identity, else as the derivative of the W'
        // determinant
        double w2;
        if (chain.members.size() == 2) {
            w2 = -2.0 * u0.v[ui] * u0.d[ui];
        } else {
            std::vector<int> dorders = base;
            dorders.back() += 1;
            w2 = detail::det_derivative_at(ms, dorders, i);
        }
        const double wv = w.v[ui], wd = w.d[ui];
        const double loglap = (w2 * wv - wd * wd) / (wv * wv);
        tr.U1.v[ui] = U0.v[ui] - 2.0 * loglap + C;
    }
    {
        auto d = fd_derivative(tr.U1.v, tr.U1.grid->h());
        tr.U1.d = std::move(d);
    }
    return tr;
}

/// Phi = W_{u_0..u_{N-1}, psi} / W_{u_0..u_{N-1}}; the derivative comes from
/// the bumped numerator determinant and the quotient rule, so no differencing
/// of Phi is involved.
inline SampledFunction transform_solution(const JordanChain& chain,
                                          const SampledFunction& psi,
                                          const WronskianData* wron = nullptr) {
    if (!psi.ode && !psi.d2)
        throw Error("transform_solution: psi needs an ODE context");
    WronskianData local;
    if (!wron) {
        local = wronskian(chain);
        wron = &local;
    }
    std::vector<const SampledFunction*> ms;
    for (const auto& m : chain.members) ms.push_back(&m);
    ms.push_back(&psi);
    const auto orders = detail::iota_orders(ms.size());

    SampledFunction phi = make_sampled(psi.grid);
    detail::clip_valid(phi, ms);
    phi.valid_lo = std::max(phi.lo(), wron->w.lo());
    if (wron->w.valid_hi >= 0)
        phi.valid_hi = phi.valid_hi < 0 ? wron->w.valid_hi
                                        : std::min(phi.valid_hi, wron->w.valid_hi);
    const SampledFunction& u0 = chain.members.front();
    for (int i = phi.lo(); i <= phi.hi(); ++i) {
        const auto ui = static_cast<size_t>(i);
        // Precondition the psi column when it is dominated by a large multiple
        // of the u0 column (e.g. psi ~ Q*u0 near a singular endpoint): subtract
        // that multiple if it shrinks the column. The determinant is invariant.
        double shift = 0.0;
        if (u0.v[ui] != 0.0) {
            const double alpha = -psi.v[ui] / u0.v[ui];
            double before = 0.0, after = 0.0;
            for (int k = 0; k < static_cast<int>(ms.size()); ++k) {
                const double p = derivative_at(psi, i, k);
                const double b = derivative_at(u0, i, k);
                before += std::abs(p);
                after += std::abs(p + alpha * b);
            }
            if (after < 0.25 * before) shift = alpha;
        }
        const double a = detail::det_at(ms, orders, i, shift);
        const double ad = detail::det_derivative_at(ms, orders, i, shift);
        const double wv = wron->w.v[ui], wd = wron->w.d[ui];
        phi.v[ui] = a / wv;
        phi.d[ui] = (ad * wv - a * wd) / (wv * wv);
    }
    return phi;
}

/// Missing state Phi_1 = W_{u_0..u_{N-2}} / W_{u_0..u_{N-1}}; solves the
/// transformed equation at epsilon = lambda (+ C after shifting).
inline SampledFunction missing_state(const JordanChain& chain,
                                     const WronskianData* wron = nullptr) {
    WronskianData local;
    if (!wron) {
        local = wronskian(chain);
        wron = &local;
    }
    const SampledFunction& num = wron->w_sub;
    const SampledFunction& den = wron->w;

    SampledFunction phi = make_sampled(den.grid);
    phi.valid_lo = std::max(num.lo(), den.lo());
    phi.valid_hi = std::min(num.hi(), den.hi());
    if (phi.valid_lo == 0 && phi.valid_hi == phi.n() - 1) phi.valid_hi = -1;
    for (int i = phi.lo(); i <= phi.hi(); ++i) {
        const auto ui = static_cast<size_t>(i);
        const double nv = num.v[ui], nd = num.d[ui];
        const double dv = den.v[ui], dd = den.d[ui];
        phi.v[ui] = nv / dv;
        phi.d[ui] = (nd * dv - nv * dd) / (dv * dv);
    }
    return phi;
}

enum class Endpoint { left, right };

/// Least-squares slope of log|f| against log(distance to the endpoint) over
/// the window fraction closest to it. The fit rejects windows where f
/// changes sign.
inline double singularity_exponent(const SampledFunction& f, Endpoint side,
                                   double window_frac = 0.05) {
    const Grid& g = *f.grid;
    const int n = f.n();
    int count = std::max(4, static_cast<int>(window_frac * n));
    std::vector<double> lx, ly;
    const double edge = side == Endpoint::left ? g.a : g.b;
    const int start = side == Endpoint::left ? std::max(f.lo(), 0)
                                             : std::min(f.hi(), n - 1);
    const int step = side == Endpoint::left ? 1 : -1;
    double sign = 0.0;
    for (int k = 0, i = start; k < count && i >= f.lo() && i <= f.hi(); ++k, i += step) {
        const double v = f.v[static_cast<size_t>(i)];
        if (v == 0.0) continue;
        if (sign == 0.0) sign = v > 0.0 ? 1.0 : -1.0;
        else if (v * sign < 0.0)
            throw Error("singularity_exponent: sign change inside the fitting window");
        lx.push_back(std::log(std::abs(g[i] - edge)));
        ly.push_back(std::log(std::abs(v)));
    }
    if (lx.size() < 3) throw Error("singularity_exponent: window too small");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(lx.size());
    for (size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace csusy
