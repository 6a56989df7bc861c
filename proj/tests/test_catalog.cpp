#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "csusy/csusy.hpp"

using namespace csusy;

namespace {

double relative_identity_error(const ModelSystem& sys) {
    // |q0^2 + q0' - U0| / (1 + |U0|); the relative scaling keeps the check
    // meaningful near singular walls where U0 reaches 1e8 and beyond.
    double worst = 0.0;
    for (int i = 0; i < sys.grid->n_points; ++i) {
        const double x = (*sys.grid)[i];
        const double u = sys.U0_fn(x);
        const double r = sys.q0_fn(x) * sys.q0_fn(x) + sys.dq0_fn(x) - u;
        worst = std::max(worst, std::abs(r) / (1.0 + std::abs(u)));
    }
    return worst;
}

double schrodinger_residual(const ModelSystem& sys, int n) {
    SampledFunction psi = sys.psi1(n);
    auto d2 = fd_second_derivative(psi.v, sys.grid->h());
    const double eps = sys.epsilon_n(n);
    double worst = 0.0, scale = psi.max_abs();
    for (int i = psi.lo() + 2; i <= psi.hi() - 2; ++i) {
        const auto ui = static_cast<size_t>(i);
        const double x = (*sys.grid)[i];
        // skip the wall neighborhoods where U0 is too steep for the stencil
        if (std::abs(sys.U0.v[ui]) > 1e4) continue;
        worst = std::max(worst,
                         std::abs(d2[ui] - (sys.U0_fn(x) - eps) * psi.v[ui]));
    }
    return worst / std::max(1.0, scale);
}

double overlap(const SampledFunction& a, const SampledFunction& b) {
    SampledFunction pa = make_sampled(a.grid), pb = pa, pc = pa;
    const int lo = std::max(a.lo(), b.lo()), hi = std::min(a.hi(), b.hi());
    for (int i = lo; i <= hi; ++i) {
        const auto ui = static_cast<size_t>(i);
        pa.v[ui] = a.v[ui] * a.v[ui];
        pb.v[ui] = b.v[ui] * b.v[ui];
        pc.v[ui] = a.v[ui] * b.v[ui];
    }
    return integrate(pc, lo, hi) /
           std::sqrt(integrate(pa, lo, hi) * integrate(pb, lo, hi));
}

} // namespace

TEST_CASE("catalog systems satisfy q0^2 + q0' = U0") {
    CHECK(relative_identity_error(coulomb_system(1, 1.0)) < 1e-9);
    CHECK(relative_identity_error(coulomb_system(2, 1.0)) < 1e-9);
    CHECK(relative_identity_error(oscillator_system(-5.0, 1.0, 0.0, 1.0)) < 1e-9);
    CHECK(relative_identity_error(trig_system(1.0)) < 1e-9);
}

TEST_CASE("coulomb closed forms at ell = 1") {
    ModelSystem sys = coulomb_system(1, 1.0);
    CHECK(sys.U0_fn(1.0) == Catch::Approx(2.0 - 2.0 + 1.0));
    CHECK(sys.U0_fn(2.0) == Catch::Approx(2.0 / 4.0 - 1.0 + 1.0));
    CHECK(sys.epsilon_n(0) == Catch::Approx(0.75));
    CHECK(sys.abs_E_n(0) == Catch::Approx(std::sqrt(1.75)));
    // psi1(0) = x^2 e^{-x/2}
    SampledFunction p = sys.psi1(0);
    for (double x : {0.5, 1.0, 3.0, 7.0})
        CHECK(value_at(p, x) == Catch::Approx(x * x * std::exp(-x / 2.0)).epsilon(1e-9));
}

TEST_CASE("coulomb q0 approaches 1/ell far from the origin") {
    for (int ell : {1, 2}) {
        ModelSystem sys = coulomb_system(ell, 1.0);
        const double xr = (*sys.grid)[sys.grid->n_points - 1];
        // the deviation from 1/ell is exactly the ell/x tail
        CHECK(std::abs(sys.q0_fn(xr) - 1.0 / ell) ==
              Catch::Approx(ell / xr).margin(1e-8));
        CHECK(std::abs(sys.q0_fn(xr) - 1.0 / ell) < 0.03);
    }
}

TEST_CASE("oscillator rational q0 members") {
    ModelSystem a1 = oscillator_system(-1.0, 1.0, 0.0, 1.0);
    for (double x : {0.3, 1.1, 2.5})
        CHECK(a1.q0_fn(x) == Catch::Approx(x).margin(1e-10));

    ModelSystem a5 = oscillator_system(-5.0, 1.0, 0.0, 1.0);
    for (double x : {0.3, 1.1, 2.5})
        CHECK(a5.q0_fn(x) ==
              Catch::Approx(x + 4.0 * x / (2.0 * x * x + 1.0)).margin(1e-10));
    CHECK(a5.epsilon_n(0) == Catch::Approx(6.0));
    CHECK(a5.abs_E_n(2) == Catch::Approx(std::sqrt(10.0 + 1.0)));

    // q0 = x + 8(2x^3+3x)/(4x^4+12x^2+3): the unique rational member that
    // closes q0^2 + q0' = x^2 + 9
    ModelSystem a9 = oscillator_system(-9.0, 1.0, 0.0, 1.0);
    for (double x : {0.3, 1.1, 2.5}) {
        const double expect =
            x + 8.0 * (2.0 * x * x * x + 3.0 * x) /
                    (4.0 * x * x * x * x + 12.0 * x * x + 3.0);
        CHECK(a9.q0_fn(x) == Catch::Approx(expect).margin(1e-10));
        CHECK(a9.q0_fn(x) * a9.q0_fn(x) + a9.dq0_fn(x) ==
              Catch::Approx(x * x + 9.0).margin(1e-10));
    }
}

TEST_CASE("trig closed forms") {
    ModelSystem sys = trig_system(1.0);
    CHECK(sys.epsilon_n(0) == Catch::Approx(25.0));
    CHECK(sys.abs_E_n(0) == Catch::Approx(std::sqrt(26.0)));
    CHECK(sys.abs_E_n(1) == Catch::Approx(std::sqrt(50.0)));
    SampledFunction p0 = sys.psi1(0);
    SampledFunction s0 = sys.psi2(0);
    for (double x : {0.4, M_PI / 4.0, 1.2}) {
        const double c = std::cos(x), s = std::sin(x);
        CHECK(value_at(p0, x) == Catch::Approx(c * c * c * s * s).epsilon(1e-10));
        CHECK(value_at(s0, x) ==
              Catch::Approx(5.0 * c * c * s * s * s / (1.0 + std::sqrt(26.0)))
                  .epsilon(1e-8));
    }
    CHECK(sys.q0_fn(M_PI / 4.0) == Catch::Approx(4.0)); // 2tan + 2cot at pi/4
}

TEST_CASE("catalog eigenfunctions solve their equations") {
    ModelSystem coul = coulomb_system(1, 1.0);
    for (int n = 0; n <= 2; ++n) CHECK(schrodinger_residual(coul, n) < 1e-5);
    ModelSystem osc = oscillator_system(-5.0, 1.0, 0.0, 1.0);
    for (int n = 0; n <= 3; ++n) CHECK(schrodinger_residual(osc, n) < 1e-5);
    ModelSystem trig = trig_system(1.0);
    for (int n = 0; n <= 2; ++n) CHECK(schrodinger_residual(trig, n) < 1e-5);
}

TEST_CASE("catalog eigenfunctions are mutually orthogonal") {
    for (const ModelSystem& sys :
         {coulomb_system(1, 1.0), oscillator_system(-5.0, 1.0, 0.0, 1.0),
          trig_system(1.0)}) {
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b <= 3; ++b)
                CHECK(std::abs(overlap(sys.psi1(a), sys.psi1(b))) < 1e-6);
    }
}

TEST_CASE("catalog spinors have small Dirac residuals") {
    for (const ModelSystem& sys :
         {coulomb_system(1, 1.0), oscillator_system(-5.0, 1.0, 0.0, 1.0),
          trig_system(1.0)}) {
        SampledFunction q0 = sample(sys.grid, sys.q0_fn, sys.dq0_fn);
        for (int n = 0; n <= 2; ++n) {
            Spinor s;
            s.E = sys.abs_E_n(n);
            s.m = sys.m;
            s.psi1 = sys.psi1(n);
            s.psi2 = sys.psi2(n);
            CHECK(dirac_residual(s, q0) < 1e-7);
        }
    }
}

TEST_CASE("coulomb deletion setup leaves a single endpoint Wronskian zero") {
    ModelSystem sys = coulomb_system(1, 1.0);
    DeletionSetup del = coulomb_deletion_setup(sys, 0);
    TransformResult tr = transform_potential(del.chain, sys.U0, 0.0);
    CHECK(tr.wron.nodeless_interior);
    // W vanishes like x^{2l+3} at the origin and stays negative inside
    const SampledFunction& w = tr.wron.w;
    for (int i = w.lo() + 5; i <= w.hi(); i += w.n() / 16)
        CHECK(w.v[static_cast<size_t>(i)] < 0.0);
}

TEST_CASE("oscillator insertion chain satisfies its coupled equation") {
    ModelSystem sys = oscillator_system(-5.0, 1.0, 0.0, 1.0);
    JordanChain ch = oscillator_insertion_setup(sys, 9.1, -0.01);
    REQUIRE(ch.members.size() == 2);
    auto d2 = fd_second_derivative(ch.members[1].v, sys.grid->h());
    double worst = 0.0;
    for (int i = ch.members[1].lo() + 2; i <= ch.members[1].hi() - 2; ++i) {
        const auto ui = static_cast<size_t>(i);
        if (std::abs((*sys.grid)[i]) > 5.0) continue; // tails blow past fd range
        worst = std::max(worst, std::abs(d2[ui] - ch.coeff.v[ui] * ch.members[1].v[ui] +
                                         ch.members[0].v[ui]));
    }
    CHECK(worst < 1e-3 * std::max(1.0, ch.members[1].max_abs()));
}

TEST_CASE("trig third-order chain matches the printed member forms") {
    ModelSystem sys = trig_system(1.0);
    TrigChainSetup setup = trig_third_order_setup(sys);
    REQUIRE(setup.chain.members.size() == 3);
    double e1 = 0.0, e2 = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const int i = k * (sys.grid->n_points - 1) / 21;
        const double x = (*sys.grid)[i];
        e1 = std::max(e1, std::abs(setup.chain.members[1].v[static_cast<size_t>(i)] -
                                   trig_u1_reference(x)));
        e2 = std::max(e2, std::abs(setup.chain.members[2].v[static_cast<size_t>(i)] -
                                   trig_u2_reference(x)));
    }
    CHECK(e1 < 1e-6);
    CHECK(e2 < 1e-6);
}
