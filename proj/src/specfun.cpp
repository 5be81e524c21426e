#include "textthermo/specfun.hpp"

#include <cmath>
#include <limits>

#include "textthermo/errors.hpp"

namespace textthermo {

namespace {

/* Bernoulli-number coefficients B_{2n}/(2n) of the asymptotic expansion
 * psi(x) ~ ln x - 1/(2x) - sum B_{2n}/(2n x^{2n}). */
constexpr double kPsiAsym[] = {
    1.0 / 12.0,   -1.0 / 120.0,  1.0 / 252.0,  -1.0 / 240.0,
    1.0 / 132.0,  -691.0 / 32760.0, 1.0 / 12.0,
};

constexpr double kAsymThreshold = 12.0;

}  // namespace

double digamma(double x) {
    if (!(x > 0.0))
        throw DomainError("digamma: argument must be positive");
    double result = 0.0;
    /* shift x upward until the asymptotic series applies */
    while (x < kAsymThreshold) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = 0.0;
    double power = inv2;
    for (double c : kPsiAsym) {
        series += c * power;
        power *= inv2;
    }
    return result + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
    if (!(x > 0.0))
        throw DomainError("trigamma: argument must be positive");
    double result = 0.0;
    while (x < kAsymThreshold) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    /* psi'(x) ~ 1/x + 1/(2x^2) + sum B_{2n}/x^{2n+1} */
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = 0.0;
    double power = inv * inv2;
    static constexpr double coef[] = {
        1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
        5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,
    };
    for (double c : coef) {
        series += c * power;
        power *= inv2;
    }
    return result + inv + 0.5 * inv2 + series;
}

double log_binomial(double n, double k) {
    if (!(n >= 0.0) || !(k >= 0.0) || k > n)
        throw DomainError("log_binomial: need 0 <= k <= n");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

namespace {

/* series representation of P(a,x), converges quickly for x < a + 1 */
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw DomainError("reg_lower_gamma: series failed to converge");
}

/* continued fraction for Q(a,x) (modified Lentz), best for x >= a + 1 */
double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw DomainError("reg_lower_gamma: continued fraction failed to converge");
}

}  // namespace

double reg_lower_gamma(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0))
        throw DomainError("reg_lower_gamma: need a > 0 and x >= 0");
    if (x == 0.0)
        return 0.0;
    if (x < a + 1.0)
        return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

namespace {

constexpr double kInvE = 0.36787944117144232160;  // 1/e

/* expansion of W0 around the branch point z = -1/e in
 * p = sqrt(2 (e z + 1)) */
double branch_point_series(double p) {
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 +
           p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
}

double halley_refine(double w, double z) {
    for (int i = 0; i < 12; ++i) {
        const double ew = std::exp(w);
        const double f = w * ew - z;
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if (denom == 0.0)
            break;
        const double step = f / denom;
        w -= step;
        if (std::fabs(step) <= 1e-16 * (1.0 + std::fabs(w)))
            break;
    }
    return w;
}

/* Newton iteration on w + log w = y, for W0(e^y) when e^y is huge. */
double log_form_newton(double y) {
    double w = y > 3.0 ? y - std::log(y) : 1.0;
    for (int i = 0; i < 40; ++i) {
        const double f = w + std::log(w) - y;
        const double step = f * w / (w + 1.0);
        w -= step;
        if (std::fabs(step) <= 1e-16 * std::fabs(w))
            break;
    }
    return w;
}

}  // namespace

double lambert_w0(double z) {
    if (std::isnan(z))
        throw DomainError("lambert_w0: NaN argument");
    if (std::isinf(z))
        return std::numeric_limits<double>::infinity();
    if (z < -kInvE) {
        /* allow values within rounding of the branch point itself */
        if (z < -kInvE - 1e-15 * std::fabs(z) - 1e-300)
            throw DomainError("lambert_w0: argument below -1/e");
        z = -kInvE;
    }
    if (z == 0.0)
        return 0.0;

    if (z < -kInvE + 1e-2) {
        const double p = std::sqrt(std::fmax(0.0, 2.0 * (M_E * z + 1.0)));
        const double w = branch_point_series(p);
        /* near the branch point the series alone is already at machine
         * accuracy and Halley's denominator degenerates */
        if (p < 1e-3)
            return w;
        return halley_refine(w, z);
    }

    double w0;
    if (z < 1.0) {
        /* Pade-free seed: series around 0, adequate as a Halley start */
        w0 = z * (1.0 - z + 1.5 * z * z);
        if (w0 <= -1.0)
            w0 = -0.9;
    } else if (z < 3.0) {
        w0 = 0.5 + 0.35 * std::log(z);
    } else {
        const double l1 = std::log(z);
        const double l2 = std::log(l1);
        w0 = l1 - l2 + l2 / l1;
    }
    return halley_refine(w0, z);
}

double lambert_w0_exp(double y) {
    if (std::isnan(y))
        throw DomainError("lambert_w0_exp: NaN argument");
    if (y <= 300.0)
        return lambert_w0(std::exp(y));
    return log_form_newton(y);
}

}  // namespace textthermo
