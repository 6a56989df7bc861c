#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "csusy/differentiate.hpp"
#include "csusy/quadrature.hpp"
#include "csusy/sampled.hpp"

namespace csusy {

/// V = m*sigma3 + q(x)*sigma1.
struct PseudoscalarPotential {
    double m = 1.0;
    SampledFunction q;
    std::string label;
};

struct Spinor {
    double E = 0.0;
    double m = 1.0;
    SampledFunction psi1;
    SampledFunction psi2;
};

/// U = q^2 + q' (the Schrodinger potential equivalent to the Dirac problem
/// through epsilon = E^2 - m^2).
inline SampledFunction reduce_to_schrodinger(const PseudoscalarPotential& V) {
    SampledFunction U = make_sampled(V.q.grid);
    U.valid_lo = V.q.lo();
    U.valid_hi = V.q.valid_hi;
    for (size_t i = 0; i < U.v.size(); ++i)
        U.v[i] = V.q.v[i] * V.q.v[i] + V.q.d[i];
    return U;
}

/// Dirac energy pair (+|E|, -|E|) for a Schrodinger eigenvalue epsilon under
/// shift C: |E| = sqrt(epsilon + C + m^2).
inline std::pair<double, double> energy_map(double epsilon, double C, double m) {
    const double r = epsilon + C + m * m;
    if (r < 0.0) throw Error("energy_map: negative radicand, no real energy");
    const double e = std::sqrt(r);
    return {e, -e};
}

/// Solution of y'' = U y (epsilon = 0) from the given initial data; blow-up
/// truncates the valid range.
struct ZeroEnergyIC {
    double value = 1.0;
    double slope = 0.0;
    int anchor = -1; // default: grid midpoint
};

inline SampledFunction zero_energy_solution(const SampledFunction& U1,
                                            const ZeroEnergyIC& ic = {});

/// q = (log q_hat)' on a nodeless q_hat; q' is reconstructed through
/// q_hat'' = U1 q_hat so that q^2 + q' = U1 holds exactly at sample points.
inline SampledFunction riccati_particular(const SampledFunction& q_hat) {
    for (int i = q_hat.lo(); i < q_hat.hi(); ++i) {
        const double a = q_hat.v[static_cast<size_t>(i)];
        const double b = q_hat.v[static_cast<size_t>(i) + 1];
        if (a == 0.0 || (a > 0.0) != (b > 0.0))
            throw SingularChainError("q_hat has a node", (*q_hat.grid)[i]);
    }
    SampledFunction q = make_sampled(q_hat.grid);
    q.valid_lo = q_hat.lo();
    q.valid_hi = q_hat.valid_hi;
    for (int i = q.lo(); i <= q.hi(); ++i) {
        const auto ui = static_cast<size_t>(i);
        q.v[ui] = q_hat.d[ui] / q_hat.v[ui];
        q.d[ui] = derivative_at(q_hat, i, 2) / q_hat.v[ui] - q.v[ui] * q.v[ui];
    }
    return q;
}

struct RiccatiFamily {
    SampledFunction q_hat;
    SampledFunction q_particular;
    double c = 0.0;
    SampledFunction q_general;
    // one-sided admissible ranges for c: c < admissible_below or c > admissible_above
    double admissible_below = 0.0;
    double admissible_above = 0.0;
};

/// One-parameter family q = (log q_hat)' + [q_hat^2 (c + I)]^{-1} with
/// I(x) = int_mid^x 1/q_hat^2; c must keep c + I sign-definite on the interior.
inline RiccatiFamily riccati_family(const SampledFunction& q_hat, double c) {
    RiccatiFamily fam;
    fam.q_hat = q_hat;
    fam.q_particular = riccati_particular(q_hat);
    fam.c = c;

    const int n = q_hat.n();
    std::vector<double> inv(static_cast<size_t>(n), 0.0);
    for (int i = q_hat.lo(); i <= q_hat.hi(); ++i)
        inv[static_cast<size_t>(i)] = 1.0 / (q_hat.v[static_cast<size_t>(i)] * q_hat.v[static_cast<size_t>(i)]);
    std::vector<double> I = cumulative(inv, q_hat.grid, q_hat.grid->mid());

    double imin = I[static_cast<size_t>(q_hat.lo())], imax = imin;
    for (int i = q_hat.lo(); i <= q_hat.hi(); ++i) {
        imin = std::min(imin, I[static_cast<size_t>(i)]);
        imax = std::max(imax, I[static_cast<size_t>(i)]);
    }
    fam.admissible_below = -imax;
    fam.admissible_above = -imin;
    for (int i = q_hat.lo(); i < q_hat.hi(); ++i) {
        const double a = c + I[static_cast<size_t>(i)];
        const double b = c + I[static_cast<size_t>(i) + 1];
        if (a == 0.0 || (a > 0.0) != (b > 0.0))
            throw FamilySingularityError("c + I crosses zero", (*q_hat.grid)[i],
                                         fam.admissible_below, fam.admissible_above);
    }

    fam.q_general = make_sampled(q_hat.grid);
    fam.q_general.valid_lo = fam.q_particular.lo();
    fam.q_general.valid_hi = fam.q_particular.valid_hi;
    for (int i = fam.q_general.lo(); i <= fam.q_general.hi(); ++i) {
        const auto ui = static_cast<size_t>(i);
        const double qh = q_hat.v[ui], qhd = q_hat.d[ui];
        const double den = qh * qh * (c + I[ui]);
        fam.q_general.v[ui] = fam.q_particular.v[ui] + 1.0 / den;
        fam.q_general.d[ui] = fam.q_particular.d[ui] -
                              (2.0 * qh * qhd * (c + I[ui]) + 1.0) / (den * den);
    }
    return fam;
}

/// Second spinor component from the first: psi2 = (q psi1 - psi1')/(E + m).
/// psi1 with a second derivative available (ODE context) yields an exact
/// psi2 derivative as well.
inline Spinor assemble_spinor(const SampledFunction& q, const SampledFunction& phi1,
                              double E, double m) {
    if (E == -m) throw Error("assemble_spinor: E = -m");
    Spinor s;
    s.E = E;
    s.m = m;
    s.psi1 = phi1;
    s.psi2 = make_sampled(phi1.grid);
    s.psi2.valid_lo = std::max(phi1.lo(), q.lo());
    s.psi2.valid_hi = std::min(phi1.hi(), q.hi());
    if (s.psi2.valid_lo == 0 && s.psi2.valid_hi == s.psi2.n() - 1) s.psi2.valid_hi = -1;
    const bool exact = phi1.ode || phi1.d2;
    for (int i = s.psi2.lo(); i <= s.psi2.hi(); ++i) {
        const auto ui = static_cast<size_t>(i);
        s.psi2.v[ui] = (q.v[ui] * phi1.v[ui] - phi1.d[ui]) / (E + m);
        if (exact)
            s.psi2.d[ui] = (q.d[ui] * phi1.v[ui] + q.v[ui] * phi1.d[ui] -
                            derivative_at(phi1, i, 2)) / (E + m);
    }
    if (!exact) {
        auto d = fd_derivative(s.psi2.v, s.psi2.grid->h());
        s.psi2.d = std::move(d);
    }
    return s;
}

/// Max over the interior of the two first-order component residuals
/// |psi1' - q psi1 + (E+m) psi2| + |psi2' + q psi2 - (E-m) psi1|.
inline double dirac_residual(const Spinor& s, const SampledFunction& q) {
    double r = 0.0;
    const int lo = std::max({s.psi1.lo(), s.psi2.lo(), q.lo()});
    const int hi = std::min({s.psi1.hi(), s.psi2.hi(), q.hi()});
    for (int i = lo + 1; i < hi; ++i) {
        const auto ui = static_cast<size_t>(i);
        const double r1 = s.psi1.d[ui] - q.v[ui] * s.psi1.v[ui] + (s.E + s.m) * s.psi2.v[ui];
        const double r2 = s.psi2.d[ui] + q.v[ui] * s.psi2.v[ui] - (s.E - s.m) * s.psi1.v[ui];
        r = std::max(r, std::abs(r1) + std::abs(r2));
    }
    return r;
}

/// L2 norm integral of both components over the grid.
inline double spinor_norm(const Spinor& s) {
    SampledFunction dens = make_sampled(s.psi1.grid);
    const int lo = std::max(s.psi1.lo(), s.psi2.lo());
    const int hi = std::min(s.psi1.hi(), s.psi2.hi());
    for (int i = lo; i <= hi; ++i) {
        const auto ui = static_cast<size_t>(i);
        dens.v[ui] = s.psi1.v[ui] * s.psi1.v[ui] + s.psi2.v[ui] * s.psi2.v[ui];
    }
    return integrate(dens, lo, hi);
}

/// Decay verdict near one end of the valid range: the RMS magnitude over the
/// window half closer to the endpoint must not exceed the half further away.
/// A finite grid integral is always finite, so normalizability is judged from
/// this endpoint behavior instead.
/// Decay fit over the outer window: least-squares slope of log|f| against the
/// distance to the endpoint. A positive slope means |f| shrinks toward the
/// endpoint; a finite grid always gives a finite integral, so the verdict
/// rests on the trend, not the raw norm.
inline bool decays_toward(const SampledFunction& f, bool left_end,
                          double window_frac = 0.05) {
    const int lo = f.lo(), hi = f.hi();
    int count = std::max(8, static_cast<int>(window_frac * f.n()));
    count = std::min(count, hi - lo);
    const int start = left_end ? lo : hi;
    const int step = left_end ? 1 : -1;
    const double edge = left_end ? (*f.grid)[lo] : (*f.grid)[hi];
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (int k = 0, i = start; k < count; ++k, i += step) {
        const double v = std::abs(f.v[static_cast<size_t>(i)]);
        if (v == 0.0) continue;
        const double dist = std::abs((*f.grid)[i] - edge);
        const double lv = std::log(v);
        sx += dist;
        sy += lv;
        sxx += dist * dist;
        sxy += dist * lv;
        n += 1.0;
    }
    if (n < 3) return false;
    return n * sxy - sx * sy > 0.0;
}

struct NormReport {
    double norm = 0.0;
    bool decays_left = false;
    bool decays_right = false;
    bool normalizable = false;
};

inline NormReport spinor_norm_report(const Spinor& s) {
    NormReport rep;
    rep.norm = spinor_norm(s);
    rep.decays_left = decays_toward(s.psi1, true) && decays_toward(s.psi2, true);
    rep.decays_right = decays_toward(s.psi1, false) && decays_toward(s.psi2, false);
    rep.normalizable = rep.decays_left && rep.decays_right;
    return rep;
}

} // namespace csusy

#include "csusy/ode.hpp"

namespace csusy {

inline SampledFunction zero_energy_solution(const SampledFunction& U1,
                                            const ZeroEnergyIC& ic) {
    const int anchor = ic.anchor < 0 ? U1.grid->mid() : ic.anchor;
    SampledFunction q_hat = solve_linear_ode2(U1, nullptr, ic.value, ic.slope, anchor);
    return q_hat;
}

} // namespace csusy
