#include "textthermo/distfit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "textthermo/errors.hpp"
#include "textthermo/specfun.hpp"

namespace textthermo {

std::vector<double> per_text_samples(const std::vector<CountTable>& texts,
                                     const std::string& word, std::int64_t l0) {
    if (texts.empty())
        throw InsufficientDataError("per_text_samples: no texts");
    if (l0 <= 0)
        throw DomainError("per_text_samples: l0 must be positive");
    std::vector<double> samples;
    samples.reserve(texts.size());
    for (const auto& t : texts)
        samples.push_back(normalize_count(t.at(word), t.length, l0));
    return samples;
}

GammaParams fit_gamma(const std::vector<double>& samples, std::size_t sample_floor) {
    if (samples.size() < std::max<std::size_t>(sample_floor, 2))
        throw InsufficientDataError("fit_gamma: need at least " +
                                    std::to_string(std::max<std::size_t>(sample_floor, 2)) +
                                    " samples, got " + std::to_string(samples.size()));
    double sum = 0.0, sum_log = 0.0;
    double lo = samples.front(), hi = samples.front();
    for (double x : samples) {
        if (!(x > 0.0))
            throw DomainError("fit_gamma: samples must be strictly positive");
        sum += x;
        sum_log += std::log(x);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (lo == hi)
        throw DegenerateDataError("fit_gamma: all samples identical");
    const double n = static_cast<double>(samples.size());
    const double mean = sum / n;
    const double mean_log = sum_log / n;
    const double s = std::log(mean) - mean_log;  // > 0 by Jensen
    if (!(s > 0.0))
        throw DegenerateDataError("fit_gamma: zero log-dispersion");

    /* Closed-form starting point, then Newton on
     * log(a) - psi(a) = s, which is monotone in a. */
    double a = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int it = 0; it < 100; ++it) {
        const double f = std::log(a) - digamma(a) - s;
        const double fp = 1.0 / a - trigamma(a);
        double step = f / fp;
        double next = a - step;
        if (next <= 0.0)
            next = a * 0.5;  // keep the iterate positive
        if (std::fabs(next - a) <= 1e-13 * a) {
            a = next;
            break;
        }
        a = next;
    }
    if (!std::isfinite(a) || a <= 0.0)
        throw DegenerateDataError("fit_gamma: shape estimate diverged");
    return GammaParams{a, a / mean};
}

PooledFit fit_pooled_b(const std::map<std::string, std::vector<double>>& word_samples,
                       double frequency_floor) {
    std::vector<double> pool;
    double raw_sum = 0.0;
    std::size_t raw_n = 0;
    std::map<std::string, double> means;
    for (const auto& [word, samples] : word_samples) {
        std::vector<double> positive;
        double sum = 0.0;
        for (double x : samples) {
            if (!(x >= 0.0))
                throw DomainError("fit_pooled_b: samples must be non-negative");
            if (x > 0.0) {
                positive.push_back(x);
                sum += x;
            }
        }
        if (positive.empty())
            continue;
        if (static_cast<double>(positive.size()) >= frequency_floor)
            continue;  // frequent enough for an individual fit
        const double mean = sum / static_cast<double>(positive.size());
        means[word] = mean;
        for (double x : positive)
            pool.push_back(x / mean);
        raw_sum += sum;
        raw_n += positive.size();
    }
    if (pool.empty())
        throw InsufficientDataError("fit_pooled_b: empty pool");

    /* The rescaled pool has unit mean by construction, so the fitted shape
     * equals the fitted rate there; dividing by the raw pool mean converts
     * it into the shared rate at the original scale. */
    const GammaParams unit = fit_gamma(pool, 2);
    const double raw_mean = raw_sum / static_cast<double>(raw_n);

    PooledFit out;
    out.b_shared = unit.shape / raw_mean;
    for (const auto& [word, mean] : means)
        out.per_word_a[word] = out.b_shared * mean;
    return out;
}

double ks_critical_value(std::size_t n, double alpha) {
    if (n == 0 || !(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("ks_critical_value: bad arguments");
    return std::sqrt(-0.5 * std::log(alpha / 2.0) / static_cast<double>(n));
}

double gamma_cdf(double x, const GammaParams& params) {
    if (!(params.shape > 0.0) || !(params.rate > 0.0))
        throw DomainError("gamma_cdf: parameters must be positive");
    if (x <= 0.0)
        return 0.0;
    return reg_lower_gamma(params.shape, params.rate * x);
}

KsResult ks_test(std::vector<double> samples, const GammaParams& params, double alpha) {
    if (samples.size() < 5)
        throw InsufficientDataError("ks_test: need at least 5 samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = gamma_cdf(samples[i], params);
        const double above = (static_cast<double>(i) + 1.0) / n - f;
        const double below = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(above, below));
    }
    KsResult r;
    r.statistic = d;
    r.pass = d < ks_critical_value(samples.size(), alpha);
    return r;
}

namespace {

/* uniform double in [0, 1) with 53 random bits */
inline double canonical(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double canonical_open(std::mt19937_64& rng) {
    for (;;) {
        const double u = canonical(rng);
        if (u > 0.0)
            return u;
    }
}

/* one standard normal via Box-Muller; the partner value is cached */
struct NormalSource {
    std::mt19937_64& rng;
    bool have_spare = false;
    double spare = 0.0;

    double operator()() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double u1 = canonical_open(rng);
        const double u2 = canonical(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare = r * std::sin(t);
        have_spare = true;
        return r * std::cos(t);
    }
};

/* Marsaglia-Tsang rejection sampler for shape >= 1, unit rate. */
double gamma_variate_ge1(double shape, NormalSource& normal, std::mt19937_64& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = canonical_open(rng);
        if (u < 1.0 - 0.0331 * x * x * x * x)
            return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

}  // namespace

std::vector<double> sample_gamma(const GammaParams& params, std::size_t n,
                                 std::uint64_t seed) {
    if (!(params.shape > 0.0) || !(params.rate > 0.0))
        throw DomainError("sample_gamma: parameters must be positive");
    std::mt19937_64 rng(seed);
    NormalSource normal{rng};
    std::vector<double> out;
    out.reserve(n);
    const bool boost = params.shape < 1.0;
    const double shape = boost ? params.shape + 1.0 : params.shape;
    for (std::size_t i = 0; i < n; ++i) {
        double g = gamma_variate_ge1(shape, normal, rng);
        if (boost)
            g *= std::pow(canonical_open(rng), 1.0 / params.shape);
        double x = g / params.rate;
        if (x <= 0.0 || !std::isfinite(x))
            x = std::numeric_limits<double>::min();  // guard underflow
        out.push_back(x);
    }
    return out;
}

namespace {

std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void save_fit_table(const FitTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    out << "# fittable l0=" << table.fit_l0
        << " corpus_length=" << table.corpus_length
        << " corpus_docs=" << table.corpus_docs
        << " b_shared=" << format_g12(table.b_shared)
        << " b_shared_defaulted=" << (table.b_shared_defaulted ? 1 : 0) << "\n";
    out << "word\ta\tb\tn_samples\tks_statistic\tpooled\n";
    for (const auto& [w, e] : table.words) {
        out << w << '\t' << format_g12(e.shape) << '\t' << format_g12(e.rate) << '\t'
            << e.n_samples << '\t' << format_g12(e.ks_statistic) << '\t'
            << (e.pooled ? 1 : 0) << '\n';
    }
    if (!out)
        throw IoError("write failed: " + path.string());
}

FitTable load_fit_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw IoError("empty fit table: " + path.string());
    FitTable t;
    int defaulted = 0;
    long long l0 = 0, clen = 0, cdocs = 0;
    if (std::sscanf(line.c_str(),
                    "# fittable l0=%lld corpus_length=%lld corpus_docs=%lld "
                    "b_shared=%lf b_shared_defaulted=%d",
                    &l0, &clen, &cdocs, &t.b_shared, &defaulted) != 5)
        throw IoError("bad fit table header: " + path.string());
    t.fit_l0 = l0;
    t.corpus_length = clen;
    t.corpus_docs = cdocs;
    t.b_shared_defaulted = defaulted != 0;
    if (!std::getline(in, line) || line != "word\ta\tb\tn_samples\tks_statistic\tpooled")
        throw IoError("bad fit table column header: " + path.string());
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string word, a_s, b_s, n_s, ks_s, p_s;
        if (!std::getline(row, word, '\t') || !std::getline(row, a_s, '\t') ||
            !std::getline(row, b_s, '\t') || !std::getline(row, n_s, '\t') ||
            !std::getline(row, ks_s, '\t') || !std::getline(row, p_s))
            throw IoError("bad fit table row: " + path.string());
        FitEntry e;
        try {
            e.shape = std::stod(a_s);
            e.rate = std::stod(b_s);
            e.n_samples = std::stoll(n_s);
            e.ks_statistic = std::stod(ks_s);
            e.pooled = std::stoi(p_s) != 0;
        } catch (const std::exception&) {
            throw IoError("bad fit table value: " + path.string());
        }
        if (!t.words.emplace(word, e).second)
            throw IoError("duplicate word in fit table: " + path.string());
    }
    return t;
}

}  // namespace textthermo
