#pragma once

/* Slow reference computations for the test suite. Everything here is
 * deliberately written along different lines than the library: direct
 * extended-precision sums with a multiplicative binomial recurrence
 * instead of log-gamma plus log-sum-exp, and the entropy taken over
 * microstates instead of through the thermodynamic identity. */

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline long double potential(long double x, long double nv, long double b) {
    return b * (x - nv - nv * logl(x / nv));
}

struct Stats {
    long double log_z = 0;
    long double free_energy = 0;
    long double internal_energy = 0;
    long double entropy = 0;  // Gibbs sum over microstates
    long double specific_heat = 0;
};

/* Direct ensemble sums for m = 1..n. Safe for n up to a few thousand,
 * where C(n, n/2) still fits in a long double. Energies are shifted by
 * their minimum before exponentiating so that strongly bound ensembles
 * do not underflow the whole sum. */
inline Stats ensemble(std::int64_t n, long double nv, long double b,
                      long double beta) {
    std::vector<long double> choose(static_cast<std::size_t>(n));
    std::vector<long double> ep(static_cast<std::size_t>(n));
    long double c = static_cast<long double>(n);  // C(n, 1)
    long double ep_min = potential(1.0L, nv, b);
    for (std::int64_t m = 1; m <= n; ++m) {
        choose[static_cast<std::size_t>(m - 1)] = c;
        const long double e = potential(static_cast<long double>(m), nv, b);
        ep[static_cast<std::size_t>(m - 1)] = e;
        if (e < ep_min) ep_min = e;
        c *= static_cast<long double>(n - m) / static_cast<long double>(m + 1);
    }

    long double z = 0, z_e = 0;
    for (std::int64_t m = 1; m <= n; ++m) {
        const std::size_t i = static_cast<std::size_t>(m - 1);
        const long double w = choose[i] * expl(-beta * (ep[i] - ep_min));
        z += w;
        z_e += w * ep[i];
    }

    Stats out;
    out.log_z = logl(z) - beta * ep_min;
    out.free_energy = -out.log_z / beta;
    out.internal_energy = z_e / z;

    long double z_v = 0, gibbs = 0;
    for (std::int64_t m = 1; m <= n; ++m) {
        const std::size_t i = static_cast<std::size_t>(m - 1);
        const long double w = choose[i] * expl(-beta * (ep[i] - ep_min));
        const long double d = ep[i] - out.internal_energy;
        z_v += w * d * d;
        /* each of the C(n,m) microstates in class m has probability
         * exp(-beta ep)/Z, so its log is -beta (ep - ep_min) - log(z) */
        if (w > 0) {
            const long double log_q = -beta * (ep[i] - ep_min) - logl(z);
            gibbs -= (w / z) * log_q;
        }
    }
    out.specific_heat = beta * beta * z_v / z;
    out.entropy = gibbs;
    return out;
}

/* log of the partition sum alone, usable inside finite differences. */
inline long double log_partition(std::int64_t n, long double nv, long double b,
                                 long double beta) {
    return ensemble(n, nv, b, beta).log_z;
}

}  // namespace oracle
