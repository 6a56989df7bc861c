#pragma once

#include <cmath>
#include <utility>

#include "csusy/catalog.hpp"
#include "csusy/config.hpp"
#include "csusy/spectral.hpp"

namespace csusy {

inline ModelSystem build_system(const RunConfig& cfg) {
    if (cfg.system == "coulomb")
        return cfg.n_points > 0 ? coulomb_system(cfg.ell, cfg.m, 3, cfg.n_points)
                                : coulomb_system(cfg.ell, cfg.m);
    if (cfg.system == "oscillator")
        return cfg.n_points > 0
                   ? oscillator_system(cfg.A, cfg.c1, cfg.c2, cfg.m, cfg.n_points)
                   : oscillator_system(cfg.A, cfg.c1, cfg.c2, cfg.m);
    return cfg.n_points > 0 ? trig_system(cfg.m, cfg.n_points) : trig_system(cfg.m);
}

/// Even-branch oscillator solution at base energy eps (c2 = 0 in the general
/// solution), with exact derivative and ODE context.
inline SampledFunction oscillator_even_solution(const ModelSystem& sys, double eps) {
    const double a = (1.0 - eps - sys.A) / 4.0;
    auto val = [a](double x) { return std::exp(-0.5 * x * x) * hyp1f1(a, 0.5, x * x); };
    auto der = [a](double x) {
        const double z = x * x;
        return std::exp(-0.5 * z) *
               (-x * hyp1f1(a, 0.5, z) + 4.0 * a * x * hyp1f1(a + 1.0, 1.5, z));
    };
    SampledFunction f = sample(sys.grid, val, der);
    attach_ode(f, detail::shifted_coeff(sys.U0, eps));
    return f;
}

struct Pipeline {
    ModelSystem sys;
    JordanChain chain;
    TransformResult tr;
    SampledFunction q_hat; // zero-energy solution of the transformed problem
    SampledFunction q1;
    SpectrumReport before, after;
    DiffReport diff;
    RegularityReport reg;
};

inline std::pair<double, double> default_window(const RunConfig& cfg,
                                                const ModelSystem& sys) {
    if (cfg.window_lo != cfg.window_hi) return {cfg.window_lo, cfg.window_hi};
    double lo = 0.5 * sys.epsilon_n(0);
    if (cfg.system == "oscillator")
        lo = std::min(sys.epsilon_n(0), cfg.lambda) - 1.0;
    const int k = std::max(1, cfg.max_states - 1);
    const double hi = 0.5 * (sys.epsilon_n(k) + sys.epsilon_n(k + 1));
    return {lo, hi};
}

/// Full transformation pipeline: chain, transformed potential, zero-energy
/// solution, Riccati recovery of q1, and before/after spectra.
inline Pipeline run_pipeline(const RunConfig& cfg, bool with_spectra = true) {
    Pipeline p;
    p.sys = build_system(cfg);

    if (cfg.system == "coulomb") {
        p.chain = coulomb_deletion_setup(p.sys, cfg.n0).chain;
    } else if (cfg.system == "oscillator") {
        p.chain = oscillator_insertion_setup(p.sys, cfg.lambda, cfg.B);
    } else {
        p.chain = trig_third_order_setup(p.sys).chain;
    }
    p.tr = transform_potential(p.chain, p.sys.U0, cfg.C, cfg.tau_node);

    ShootOptions sopt;
    sopt.tau_shoot = cfg.tau_shoot;
    sopt.max_states = cfg.max_states + 2;

    // zero-energy solution of the transformed problem (epsilon = 0 relative
    // to U1 including the shift C corresponds to base energy -C)
    if (cfg.system == "oscillator") {
        SampledFunction base = oscillator_even_solution(p.sys, -cfg.C);
        p.q_hat = transform_solution(p.chain, base, &p.tr.wron);
        attach_ode(p.q_hat, p.tr.U1); // zero-energy: coeff is U1 itself
    } else {
        p.q_hat = recessive_solution(p.tr.U1, 0.0, true, sopt);
    }
    p.q1 = cfg.c ? riccati_family(p.q_hat, *cfg.c).q_general
                 : riccati_particular(p.q_hat);

    p.reg = regularity_report(p.tr, p.q_hat, p.sys.epsilon_n(0));

    if (with_spectra) {
        const auto w = default_window(cfg, p.sys);
        p.before = shoot_spectrum(p.sys.U0, w, sopt, p.sys.name);
        p.after = shoot_spectrum(p.tr.U1, {w.first + cfg.C, w.second + cfg.C}, sopt,
                                 p.sys.name + "+transform");
        p.diff = compare_spectra(p.before, p.after, cfg.C, 1e-4);
    }
    return p;
}

} // namespace csusy
