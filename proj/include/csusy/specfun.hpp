#pragma once

#include <cmath>
#include <limits>

#include "csusy/errors.hpp"

namespace csusy {

/// Generalized Laguerre polynomial L_n^alpha(x), three-term recurrence.
inline double laguerre(int n, double alpha, double x) {
    if (n < 0) throw SpecfunError("laguerre: n < 0");
    double lm1 = 1.0;
    if (n == 0) return lm1;
    double l = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double lp1 = ((2.0 * k + 1.0 + alpha - x) * l - (k + alpha) * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

/// Physicists' Hermite polynomial H_n(x).
inline double hermite(int n, double x) {
    if (n < 0) throw SpecfunError("hermite: n < 0");
    double hm1 = 1.0;
    if (n == 0) return hm1;
    double hcur = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double hp1 = 2.0 * x * hcur - 2.0 * k * hm1;
        hm1 = hcur;
        hcur = hp1;
    }
    return hcur;
}

/// Kummer confluent hypergeometric 1F1(a, b, x) by direct series; terminates
/// exactly when a is a nonpositive integer.
inline double hyp1f1(double a, double b, double x, int term_cap = 10000) {
    if (b <= 0.0 && b == std::floor(b))
        throw SpecfunError("hyp1f1: b is a nonpositive integer");
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < term_cap; ++k) {
        if (a + k == 0.0) return sum; // terminating series
        term *= (a + k) * x / ((b + k) * (k + 1.0));
        sum += term;
        if (std::abs(term) <= std::numeric_limits<double>::epsilon() * std::abs(sum))
            return sum;
    }
    throw SpecfunError("hyp1f1: series did not converge within the term cap");
}

/// Terminating Gauss hypergeometric 2F1(-n, b, c, x): exact n+1 term sum.
inline double hyp2f1_poly(int n, double b, double c, double x) {
    if (n < 0) throw SpecfunError("hyp2f1_poly: n < 0");
    if (c <= 0.0 && c == std::floor(c))
        throw SpecfunError("hyp2f1_poly: c is a nonpositive integer");
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < n; ++k) {
        term *= (-n + k) * (b + k) * x / ((c + k) * (k + 1.0));
        sum += term;
    }
    return sum;
}

/// Gamma function, Lanczos approximation (g = 7, 9 coefficients) with the
/// reflection formula for x < 0.5.
inline double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw SpecfunError("gamma_fn: pole at nonpositive integer");
    static const double g = 7.0;
    static const double coeff[9] = {
        0.99999999999980993,  676.5203681218851,    -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,  12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        const double s = std::sin(M_PI * x);
        return M_PI / (s * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double a = coeff[0];
    for (int i = 1; i < 9; ++i) a += coeff[i] / (z + i);
    const double t = z + g + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

/// Tricomi U(a, b, z) by the large-z asymptotic series
///     U ~ z^{-a} sum_k (a)_k (a-b+1)_k (-z)^{-k} / k!,
/// truncated at the smallest term. Accurate for z well beyond max(|a|,|a-b+1|)^2.
inline double kummer_u_asymptotic(double a, double b, double z, int term_cap = 60) {
    double term = 1.0, sum = 1.0;
    double best = std::abs(term);
    for (int k = 0; k < term_cap; ++k) {
        term *= -(a + k) * (a - b + 1.0 + k) / ((k + 1.0) * z);
        if (std::abs(term) >= best) break; // divergence point of the asymptotic series
        best = std::abs(term);
        sum += term;
        if (std::abs(term) <= std::numeric_limits<double>::epsilon() * std::abs(sum)) break;
    }
    return std::pow(z, -a) * sum;
}

} // namespace csusy
