#pragma once

#include <cmath>
#include <vector>

#include "csusy/chain.hpp"
#include "csusy/quadrature.hpp"
#include "csusy/sampled.hpp"

namespace csusy {

constexpr double default_tau_node = 1e-10;

namespace detail {

/// Determinant of the matrix M[r][c] = (d/dx)^{orders[r]} members[c] at grid
/// index i, by Gaussian elimination with partial pivoting (sizes <= 4 in
/// practice). Derivative orders >= 2 resolve through the members' ODE
/// contexts, never by differencing.
/// Row-reduced determinant entry: the derivative row of order k with the
/// multiples of lower-order rows (per the reference ODE coefficient shared by
/// the chain) eliminated analytically. Raw entries of size coeff*u cancel to
/// the much smaller inhomogeneous parts; forming those parts directly instead
/// of subtracting keeps the determinant well conditioned near singular
/// endpoints. Row operations leave the determinant unchanged, so this is
/// exact. has0/has1/has2 say which lower-order rows are present in the order
/// set and hence which eliminations are legal.
inline double reduced_entry(const SampledFunction& f, int i, int k,
                            bool has0, bool has1, bool has2,
                            const SampledFunction* ref) {
    if (k <= 1 || !ref || !f.ode) return derivative_at(f, i, k);
    const auto ui = static_cast<size_t>(i);
    const OdeContext& c = *f.ode;
    // coeff - ref is constant for every column sharing the chain's equation
    // (zero for the members themselves, lambda - epsilon for a transformed
    // state), so its derivatives drop out.
    const double dc = c.coeff.v[ui] - ref->v[ui];
    auto g0 = [&] {
        double r = dc * f.v[ui];
        if (c.inhom) r += c.inhom_scale * c.inhom->v[ui];
        return r;
    };
    auto g1 = [&] {
        double r = dc * f.d[ui];
        if (c.inhom) r += c.inhom_scale * c.inhom->d[ui];
        return r;
    };
    auto g2 = [&] {
        double r = dc * derivative_at(f, i, 2);
        if (c.inhom) r += c.inhom_scale * derivative_at(*c.inhom, i, 2);
        return r;
    };
    switch (k) {
    case 2:
        return has0 ? g0() : derivative_at(f, i, 2);
    case 3:
        if (has0 && has1) return g1();
        if (has1) return ref->d[ui] * f.v[ui] + g1();
        if (has0) return ref->v[ui] * f.d[ui] + g1();
        return derivative_at(f, i, 3);
    case 4:
        if (has0 && has1 && has2) return g2();
        if (has0 && has1) return ref->v[ui] * g0() + g2();
        return derivative_at(f, i, 4);
    default:
        return derivative_at(f, i, k);
    }
}

/// `last_col_shift` adds that multiple of the first column to the last one
/// (a determinant-preserving column operation used to precondition a nearly
/// dependent trailing column).
inline double det_at(const std::vector<const SampledFunction*>& members,
                     const std::vector<int>& orders, int i,
                     double last_col_shift = 0.0) {
    const size_t n = members.size();
    const SampledFunction* ref =
        members.front()->ode ? &members.front()->ode->coeff : nullptr;
    bool has0 = false, has1 = false, has2 = false;
    for (int o : orders) {
        if (o == 0) has0 = true;
        if (o == 1) has1 = true;
        if (o == 2) has2 = true;
    }
    double m[6][6];
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c)
            m[r][c] = reduced_entry(*members[c], i, orders[r], has0, has1, has2, ref);
    if (last_col_shift != 0.0 && n > 1)
        for (size_t r = 0; r < n; ++r) m[r][n - 1] += last_col_shift * m[r][0];
    double det = 1.0;
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        for (size_t r = k + 1; r < n; ++r)
            if (std::abs(m[r][k]) > std::abs(m[piv][k])) piv = r;
        if (piv != k) {
            for (size_t c = k; c < n; ++c) std::swap(m[k][c], m[piv][c]);
            det = -det;
        }
        if (m[k][k] == 0.0) return 0.0;
        det *= m[k][k];
        for (size_t r = k + 1; r < n; ++r) {
            const double f = m[r][k] / m[k][k];
            for (size_t c = k; c < n; ++c) m[r][c] -= f * m[k][c];
        }
    }
    return det;
}

/// d/dx of det with row orders R = sum over rows of det with that order
/// bumped; rows colliding with an existing order contribute zero.
inline double det_derivative_at(const std::vector<const SampledFunction*>& members,
                                const std::vector<int>& orders, int i,
                                double last_col_shift = 0.0) {
    double s = 0.0;
    for (size_t r = 0; r < orders.size(); ++r) {
        bool dup = false;
        for (size_t q = 0; q < orders.size(); ++q)
            if (q != r && orders[q] == orders[r] + 1) dup = true;
        if (dup) continue;
        std::vector<int> bumped = orders;
        bumped[r] += 1;
        s += det_at(members, bumped, i, last_col_shift);
    }
    return s;
}

inline std::vector<int> iota_orders(size_t n) {
    std::vector<int> o(n);
    for (size_t r = 0; r < n; ++r) o[r] = static_cast<int>(r);
    return o;
}

inline void clip_valid(SampledFunction& f, const std::vector<const SampledFunction*>& ms) {
    for (const auto* m : ms) {
        f.valid_lo = std::max(f.valid_lo, m->lo());
        const int hi = m->hi();
        if (f.valid_hi < 0 || hi < f.valid_hi) f.valid_hi = hi;
    }
    if (f.valid_lo == 0 && f.valid_hi == f.n() - 1) f.valid_hi = -1;
}

} // namespace detail

struct WronskianData {
    SampledFunction w;     // Wronskian of all members (values + derivative)
    SampledFunction w_sub; // Wronskian of the first N-1 members
    bool nodeless_interior = true;
    std::vector<int> zero_locations;
};

/// Wronskian values and first derivative of a member list, derivative rows
/// resolved through the attached ODE contexts.
inline SampledFunction wronskian_values(const std::vector<const SampledFunction*>& members) {
    SampledFunction w = make_sampled(members.front()->grid);
    const auto orders = detail::iota_orders(members.size());
    detail::clip_valid(w, members);
    for (int i = w.lo(); i <= w.hi(); ++i) {
        w.v[static_cast<size_t>(i)] = detail::det_at(members, orders, i);
        w.d[static_cast<size_t>(i)] = detail::det_derivative_at(members, orders, i);
    }
    return w;
}

namespace detail {

/// A sampled zero: sign change between neighbors, or a magnitude collapsing
/// below tau_node relative to the adjacent samples (catches zeros that sit
/// between or on grid points without assuming a global scale).
inline void locate_zeros(const SampledFunction& w, double tau_node, WronskianData& out) {
    const int lo = w.lo(), hi = w.hi();
    for (int i = lo; i <= hi; ++i) {
        const double c = std::abs(w.v[static_cast<size_t>(i)]);
        const double nb = std::max(i > lo ? std::abs(w.v[static_cast<size_t>(i) - 1]) : 0.0,
                                   i < hi ? std::abs(w.v[static_cast<size_t>(i) + 1]) : 0.0);
        const bool flip = i < hi && w.v[static_cast<size_t>(i)] * w.v[static_cast<size_t>(i) + 1] < 0.0;
        if (c <= tau_node * nb || flip) out.zero_locations.push_back(i);
    }
    out.nodeless_interior = true;
    for (int z : out.zero_locations)
        if (z > lo + 1 && z < hi - 1) out.nodeless_interior = false;
}

} // namespace detail

/// Wronskian of a chain's members plus the sub-Wronskian needed by the
/// missing state; zero classification with relative threshold tau_node.
inline WronskianData wronskian(const std::vector<const SampledFunction*>& members,
                               double tau_node = default_tau_node) {
    if (members.empty()) throw Error("wronskian: no members");
    for (const auto* m : members)
        if (members.size() > 1 && !m->ode && !m->d2)
            throw Error("wronskian: member lacks an ODE context");
    WronskianData data;
    data.w = wronskian_values(members);
    if (members.size() >= 2) {
        std::vector<const SampledFunction*> sub(members.begin(), members.end() - 1);
        data.w_sub = wronskian_values(sub);
    } else {
        data.w_sub = make_sampled(members.front()->grid);
        for (auto& t : data.w_sub.v) t = 1.0;
    }
    detail::locate_zeros(data.w, tau_node, data);
    return data;
}

inline WronskianData wronskian(const JordanChain& chain,
                               double tau_node = default_tau_node) {
    std::vector<const SampledFunction*> ms;
    for (const auto& m : chain.members) ms.push_back(&m);
    return wronskian(ms, tau_node);
}

/// Order-2 Wronskian through its monotone integral form W = w0 - int u0^2,
/// anchored at the first grid point (W(x0) = w0).
inline WronskianData wronskian_2nd_order(const SampledFunction& u0, double w0,
                                         double tau_node = default_tau_node) {
    std::vector<double> sq(u0.v.size());
    for (size_t i = 0; i < sq.size(); ++i) sq[i] = u0.v[i] * u0.v[i];
    std::vector<double> run = cumulative(sq, u0.grid, 0);

    WronskianData data;
    data.w = make_sampled(u0.grid);
    data.w.valid_lo = u0.lo();
    data.w.valid_hi = u0.valid_hi;
    for (size_t i = 0; i < sq.size(); ++i) {
        data.w.v[i] = w0 - run[i];
        data.w.d[i] = -sq[i];
    }
    data.w_sub = u0;
    detail::locate_zeros(data.w, tau_node, data);
    return data;
}

} // namespace csusy
