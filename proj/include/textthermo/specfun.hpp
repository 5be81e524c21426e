#pragma once

/* Scalar special functions used by the fitting and thermodynamics code.
 * All routines are plain double precision and deterministic. */

namespace textthermo {

/* psi(x) for x > 0. Recurrence into the asymptotic regime; accurate to
 * about 1e-12 relative for x >= 1e-3. */
double digamma(double x);

/* psi'(x) for x > 0, same construction as digamma(). */
double trigamma(double x);

/* log of the binomial coefficient C(n, k) for real 0 <= k <= n. */
double log_binomial(double n, double k);

/* Regularized lower incomplete gamma P(a, x), a > 0, x >= 0. */
double reg_lower_gamma(double a, double x);

/* Principal branch W0 of the Lambert W function, z >= -1/e.
 * |W e^W - z| <= 1e-12 * max(1, |z|). */
double lambert_w0(double z);

/* W0(e^y) without forming e^y, valid for any y (including y far above
 * the overflow threshold). Agrees with lambert_w0(exp(y)) where both
 * are representable. */
double lambert_w0_exp(double y);

}  // namespace textthermo
