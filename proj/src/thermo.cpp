#include "textthermo/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <ostream>
#include <vector>

#include "textthermo/errors.hpp"

namespace textthermo {

namespace {

void check_input(const ThermoInput& in) {
    if (in.text_count < 1)
        throw DomainError("text_count must be at least 1");
    if (!(in.vocab_freq > 0.0) || !std::isfinite(in.vocab_freq))
        throw DomainError("vocab_freq must be positive and finite");
    if (!(in.rate > 0.0) || !std::isfinite(in.rate))
        throw DomainError("rate must be positive and finite");
    if (!(in.beta > 0.0) || !std::isfinite(in.beta))
        throw DomainError("beta must be positive and finite");
}

void saddle_note() {
    static const bool once = [] {
        std::cerr << "texttherm: occurrence count above " << kExactSumCutoff
                  << ", switching to saddle-point evaluation\n";
        return true;
    }();
    (void)once;
}

/* Term-by-term data for the partition sum: log C(n, m) and the
 * potential at each m = 1..n. Built once and swept over beta. */
struct Spectrum {
    std::int64_t n = 0;
    std::vector<double> log_choose;
    std::vector<double> ep;
};

Spectrum make_spectrum(std::int64_t n, double vocab_freq, double rate) {
    Spectrum s;
    s.n = n;
    s.log_choose.resize(static_cast<std::size_t>(n));
    s.ep.resize(static_cast<std::size_t>(n));
    for (std::int64_t m = 1; m <= n; ++m) {
        s.log_choose[static_cast<std::size_t>(m - 1)] = log_binomial(n, m);
        s.ep[static_cast<std::size_t>(m - 1)] =
            potential_energy(static_cast<double>(m), vocab_freq, rate);
    }
    return s;
}

struct EnsembleStats {
    double log_z = 0.0;
    double mean_ep = 0.0;
    double var_ep = 0.0;
};

EnsembleStats ensemble_stats(const Spectrum& s, double beta) {
    const std::size_t n = s.ep.size();
    double w_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        w_max = std::max(w_max, s.log_choose[i] - beta * s.ep[i]);

    double z = 0.0;
    double z_e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = std::exp(s.log_choose[i] - beta * s.ep[i] - w_max);
        z += t;
        z_e += t * s.ep[i];
    }
    EnsembleStats out;
    out.log_z = w_max + std::log(z);
    out.mean_ep = z_e / z;

    double z_v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = std::exp(s.log_choose[i] - beta * s.ep[i] - w_max);
        const double d = s.ep[i] - out.mean_ep;
        z_v += t * d * d;
    }
    out.var_ep = z_v / z;
    return out;
}

double ep_slope(double m, double vocab_freq, double rate) {
    return rate * (1.0 - vocab_freq / m);
}

/* Curvature of the free-energy surface at the stationary point; the
 * mixing term and the potential term are both convex there. */
double stationary_curvature(double m, const ThermoInput& in) {
    const double n = static_cast<double>(in.text_count);
    return n / (in.beta * m * (n - m)) + in.rate * in.vocab_freq / (m * m);
}

struct SaddleStats {
    double m = 0.0;
    double log_z = 0.0;
    double mean_ep = 0.0;
    double cv = 0.0;
};

SaddleStats saddle_stats(const ThermoInput& in) {
    saddle_note();
    SaddleStats out;
    out.m = order_param_closed(in);
    out.mean_ep = potential_energy(out.m, in.vocab_freq, in.rate);
    out.log_z = entropy_saddle(out.m, static_cast<double>(in.text_count)) -
                in.beta * out.mean_ep;
    const double slope = ep_slope(out.m, in.vocab_freq, in.rate);
    out.cv = in.beta * slope * slope / stationary_curvature(out.m, in);
    return out;
}

/* Extended-precision free energy used by the finite-difference route.
 * Kept separate from the double-precision path on purpose: the second
 * difference amplifies rounding noise by 1/dT^2. */
long double free_energy_wide(std::int64_t n, long double vocab_freq,
                             long double rate, long double beta) {
    const auto ep = [&](long double m) -> long double {
        const long double d = m / vocab_freq - 1.0L;
        return rate * vocab_freq * (d - log1pl(d));
    };
    if (n <= kExactSumCutoff) {
        const long double lg_n = lgammal(static_cast<long double>(n) + 1.0L);
        long double w_max = -std::numeric_limits<long double>::infinity();
        for (std::int64_t m = 1; m <= n; ++m) {
            const long double lc = lg_n - lgammal(static_cast<long double>(m) + 1.0L) -
                                   lgammal(static_cast<long double>(n - m) + 1.0L);
            w_max = std::max(w_max, lc - beta * ep(static_cast<long double>(m)));
        }
        long double z = 0.0L;
        for (std::int64_t m = 1; m <= n; ++m) {
            const long double lc = lg_n - lgammal(static_cast<long double>(m) + 1.0L) -
                                   lgammal(static_cast<long double>(n - m) + 1.0L);
            z += expl(lc - beta * ep(static_cast<long double>(m)) - w_max);
        }
        return -(w_max + logl(z)) / beta;
    }

    /* Stationary point by bisection, then the saddle value. */
    const long double nn = static_cast<long double>(n);
    const auto f = [&](long double m) -> long double {
        return logl(m / (nn - m)) / beta - rate * (vocab_freq - m) / m;
    };
    long double lo = nn * 1e-18L;
    long double hi = nn * (1.0L - 1e-18L);
    for (int i = 0; i < 40 && !(f(lo) < 0.0L); ++i) lo *= 0.5L;
    for (int i = 0; i < 300; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 0.0L)
            lo = mid;
        else
            hi = mid;
    }
    const long double m = 0.5L * (lo + hi);
    const long double s =
        nn * logl(nn) - m * logl(m) - (nn - m) * logl(nn - m);
    return -(s - beta * ep(m)) / beta;
}

void format_value(char* buf, std::size_t cap, double v) {
    std::snprintf(buf, cap, "%.12g", v);
}

}  // namespace

double potential_energy(double x, double vocab_freq, double rate) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("occurrence count must be positive and finite");
    if (!(vocab_freq > 0.0) || !std::isfinite(vocab_freq))
        throw DomainError("vocab_freq must be positive and finite");
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw DomainError("rate must be positive and finite");
    const double d = x / vocab_freq - 1.0;
    return rate * vocab_freq * (d - std::log1p(d));
}

double total_energy(std::int64_t m, const ThermoInput& in) {
    check_input(in);
    if (m < 1 || m > in.text_count)
        throw DomainError("settled count must lie in [1, text_count]");
    return -log_binomial(in.text_count, m) / in.beta +
           potential_energy(static_cast<double>(m), in.vocab_freq, in.rate);
}

double log_partition(const ThermoInput& in) {
    check_input(in);
    if (in.text_count > kExactSumCutoff)
        return saddle_stats(in).log_z;
    const Spectrum s = make_spectrum(in.text_count, in.vocab_freq, in.rate);
    return ensemble_stats(s, in.beta).log_z;
}

double free_energy(const ThermoInput& in) {
    return -log_partition(in) / in.beta;
}

double internal_energy(const ThermoInput& in) {
    check_input(in);
    if (in.text_count > kExactSumCutoff)
        return saddle_stats(in).mean_ep;
    const Spectrum s = make_spectrum(in.text_count, in.vocab_freq, in.rate);
    return ensemble_stats(s, in.beta).mean_ep;
}

double entropy_exact(const ThermoInput& in) {
    check_input(in);
    if (in.text_count > kExactSumCutoff) {
        const SaddleStats st = saddle_stats(in);
        return in.beta * st.mean_ep + st.log_z;
    }
    const Spectrum s = make_spectrum(in.text_count, in.vocab_freq, in.rate);
    const EnsembleStats e = ensemble_stats(s, in.beta);
    return in.beta * e.mean_ep + e.log_z;
}

double specific_heat_exact(const ThermoInput& in) {
    check_input(in);
    if (in.text_count > kExactSumCutoff)
        return saddle_stats(in).cv;
    const Spectrum s = make_spectrum(in.text_count, in.vocab_freq, in.rate);
    return in.beta * in.beta * ensemble_stats(s, in.beta).var_ep;
}

double specific_heat_fd(const ThermoInput& in, double dT) {
    check_input(in);
    const double t = 1.0 / in.beta;
    if (!(dT > 0.0) || !std::isfinite(dT))
        throw DomainError("temperature step must be positive and finite");
    if (dT >= t)
        throw DomainError("temperature step must be smaller than T itself");
    const long double nv = in.vocab_freq;
    const long double b = in.rate;
    const long double tl = static_cast<long double>(t);
    const long double h = static_cast<long double>(dT);
    const long double f_lo = free_energy_wide(in.text_count, nv, b, 1.0L / (tl - h));
    const long double f_mid = free_energy_wide(in.text_count, nv, b, 1.0L / tl);
    const long double f_hi = free_energy_wide(in.text_count, nv, b, 1.0L / (tl + h));
    return static_cast<double>(-tl * (f_hi - 2.0L * f_mid + f_lo) / (h * h));
}

double order_param_closed(const ThermoInput& in) {
    check_input(in);
    const double n = static_cast<double>(in.text_count);
    const double c = in.rate * in.beta;
    const double k = c * in.vocab_freq / n;
    const double w = lambert_w0_exp(std::log(k) + c - k);
    return n * k / (k + w);
}

double order_param_numeric(const ThermoInput& in) {
    check_input(in);
    const double n = static_cast<double>(in.text_count);
    const auto f = [&](double m) {
        return std::log(m / (n - m)) / in.beta -
               in.rate * (in.vocab_freq - m) / m;
    };
    double lo = n * 1e-15;
    double hi = n * (1.0 - 1e-15);
    for (int i = 0; i < 60 && !(f(lo) < 0.0); ++i) lo *= 0.5;
    for (int i = 0; i < 30 && !(f(hi) > 0.0); ++i) hi = n - 0.5 * (n - hi);
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double entropy_saddle(double m, double total) {
    if (!(total > 0.0) || !std::isfinite(total))
        throw DomainError("total count must be positive and finite");
    if (!(m > 0.0) || !(m < total))
        throw DomainError("settled count must lie strictly inside (0, total)");
    return total * std::log(total) - m * std::log(m) -
           (total - m) * std::log(total - m);
}

std::vector<double> default_beta_grid() {
    return make_beta_grid(1e-2, 1e2, 200);
}

std::vector<double> make_beta_grid(double beta_min, double beta_max, std::size_t n) {
    if (!(beta_min > 0.0) || !(beta_max > beta_min))
        throw DomainError("beta grid bounds must satisfy 0 < min < max");
    if (n < 2)
        throw DomainError("beta grid needs at least two points");
    std::vector<double> grid(n);
    const double lo = std::log(beta_min);
    const double hi = std::log(beta_max);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                    static_cast<double>(n - 1));
    grid.front() = beta_min;
    grid.back() = beta_max;
    return grid;
}

ThermoCurve thermo_curve(std::int64_t text_count, double vocab_freq, double rate,
                         const std::vector<double>& grid) {
    if (grid.empty())
        throw DomainError("beta grid is empty");
    ThermoCurve curve;
    curve.points.reserve(grid.size());

    if (text_count <= kExactSumCutoff) {
        ThermoInput probe{text_count, vocab_freq, rate, grid.front()};
        check_input(probe);
        const Spectrum s = make_spectrum(text_count, vocab_freq, rate);
        for (double beta : grid) {
            if (!(beta > 0.0) || !std::isfinite(beta))
                throw DomainError("beta must be positive and finite");
            const EnsembleStats e = ensemble_stats(s, beta);
            ThermoPoint p;
            p.beta = beta;
            p.free_energy = -e.log_z / beta;
            p.internal_energy = e.mean_ep;
            p.entropy = beta * e.mean_ep + e.log_z;
            p.specific_heat = beta * beta * e.var_ep;
            p.order_param =
                order_param_closed({text_count, vocab_freq, rate, beta});
            curve.points.push_back(p);
        }
        return curve;
    }

    for (double beta : grid) {
        ThermoInput in{text_count, vocab_freq, rate, beta};
        check_input(in);
        const SaddleStats st = saddle_stats(in);
        ThermoPoint p;
        p.beta = beta;
        p.free_energy = -st.log_z / beta;
        p.internal_energy = st.mean_ep;
        p.entropy = beta * st.mean_ep + st.log_z;
        p.specific_heat = st.cv;
        p.order_param = st.m;
        curve.points.push_back(p);
    }
    return curve;
}

void write_curve_csv(const ThermoCurve& curve, const std::string& word,
                     std::ostream& out) {
    out << "word,beta,T,F,U,S,Cv,m\n";
    char buf[64];
    for (const ThermoPoint& p : curve.points) {
        out << word;
        const double cols[] = {p.beta,         1.0 / p.beta, p.free_energy,
                               p.internal_energy, p.entropy, p.specific_heat,
                               p.order_param};
        for (double v : cols) {
            format_value(buf, sizeof buf, v);
            out << ',' << buf;
        }
        out << '\n';
    }
}

}  // namespace textthermo
