#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "textthermo/specfun.hpp"

namespace textthermo {

/* One word treated as a two-phase system: text_count occurrences may
 * settle out of the text (the liquid) onto the vocabulary (the solid).
 * vocab_freq and rate come from the vocabulary-wide gamma fit, both
 * expressed at the analyzed text's length scale. */
struct ThermoInput {
    std::int64_t text_count = 0;  // occurrences in the text, >= 1
    double vocab_freq = 0.0;      // expected occurrences at the same scale
    double rate = 0.0;            // gamma rate of the word's frequency law
    double beta = 0.0;            // inverse temperature
};

/* Energy of holding x occurrences against a vocabulary expectation:
 * rate * (x - vocab_freq - vocab_freq * log(x / vocab_freq)).
 * Zero at x == vocab_freq and positive elsewhere. */
double potential_energy(double x, double vocab_freq, double rate);

/* Energy of a configuration with m settled occurrences, including the
 * combinatorial choice of which occurrences settled:
 * -log C(text_count, m) / beta + potential_energy(m). */
double total_energy(std::int64_t m, const ThermoInput& in);

/* log of sum_{m=1..text_count} C(text_count, m) exp(-beta E_p(m)),
 * evaluated with a log-sum-exp. Above kExactSumCutoff occurrences the
 * sum is replaced by its saddle-point value (a one-time stderr note is
 * emitted). */
double log_partition(const ThermoInput& in);

double free_energy(const ThermoInput& in);      // -log_partition / beta
double internal_energy(const ThermoInput& in);  // ensemble mean of E_p
double entropy_exact(const ThermoInput& in);    // beta * (U - F)

/* beta^2 times the ensemble variance of E_p; never negative. */
double specific_heat_exact(const ThermoInput& in);

/* Finite-difference route -T [F(T+dT) - 2 F(T) + F(T-dT)] / dT^2 with
 * T = 1/beta, evaluated in extended precision. Intended as a slow
 * cross-check of specific_heat_exact. */
double specific_heat_fd(const ThermoInput& in, double dT);

/* Most probable number of settled occurrences, from the closed form
 * m = N k / (k + W0(k e^(c-k))) with k = rate*beta*vocab_freq/N and
 * c = rate*beta. */
double order_param_closed(const ThermoInput& in);

/* Same stationary point by bisection of
 * log(m/(N-m))/beta - rate*(vocab_freq-m)/m on (0, N), to 1e-12. */
double order_param_numeric(const ThermoInput& in);

/* Mixing entropy of m settled occurrences out of total, in the Stirling
 * approximation: N log N - m log m - (N-m) log(N-m). Requires 0 < m < N. */
double entropy_saddle(double m, double total);

/* Largest occurrence count for which the partition sum is evaluated
 * term by term. */
inline constexpr std::int64_t kExactSumCutoff = 100000;

struct ThermoPoint {
    double beta = 0.0;
    double free_energy = 0.0;
    double internal_energy = 0.0;
    double entropy = 0.0;
    double specific_heat = 0.0;
    double order_param = 0.0;
};

struct ThermoCurve {
    std::vector<ThermoPoint> points;  // ascending beta
};

/* 200 log-spaced inverse temperatures in [1e-2, 1e2]. */
std::vector<double> default_beta_grid();
std::vector<double> make_beta_grid(double beta_min, double beta_max, std::size_t n);

ThermoCurve thermo_curve(std::int64_t text_count, double vocab_freq, double rate,
                         const std::vector<double>& grid);

/* CSV with header word,beta,T,F,U,S,Cv,m and 12-significant-digit
 * values, one row per grid point in ascending beta. */
void write_curve_csv(const ThermoCurve& curve, const std::string& word,
                     std::ostream& out);

}  // namespace textthermo
