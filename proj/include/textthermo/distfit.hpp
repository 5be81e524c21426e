#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "textthermo/corpus.hpp"

namespace textthermo {

/* Gamma distribution in shape/rate form: density proportional to
 * x^(shape-1) e^(-rate x); the mean is shape/rate. */
struct GammaParams {
    double shape = 0.0;
    double rate = 0.0;
};

inline constexpr std::size_t kDefaultSampleFloor = 30;

/* Per-text frequencies of `word` rescaled to the reference length l0,
 * one value per text; texts without the word contribute a zero. */
std::vector<double> per_text_samples(const std::vector<CountTable>& texts,
                                     const std::string& word, std::int64_t l0);

/* Maximum-likelihood gamma fit. Requires at least sample_floor strictly
 * positive samples that are not all identical. */
GammaParams fit_gamma(const std::vector<double>& samples,
                      std::size_t sample_floor = kDefaultSampleFloor);

struct PooledFit {
    double b_shared = 0.0;                   // rate shared by the pooled words
    std::map<std::string, double> per_word_a;  // shape = b_shared * word mean
};

/* Shared-rate fit for rare words. Words with fewer than frequency_floor
 * positive samples are pooled: each word's samples are divided by its own
 * mean, a gamma is fit to the unit-mean pool, and its shape per unit of
 * the raw pool mean becomes the shared rate. With a single pooled word
 * this reproduces that word's own fit_gamma rate. */
PooledFit fit_pooled_b(const std::map<std::string, std::vector<double>>& word_samples,
                       double frequency_floor);

struct KsResult {
    double statistic = 0.0;
    bool pass = false;
};

/* One-sample Kolmogorov-Smirnov test against a gamma law, using the
 * asymptotic critical value sqrt(-log(alpha/2) / (2 n)). */
KsResult ks_test(std::vector<double> samples, const GammaParams& params, double alpha);

double ks_critical_value(std::size_t n, double alpha);

/* Gamma CDF at x. */
double gamma_cdf(double x, const GammaParams& params);

/* Deterministic gamma sampling (Marsaglia-Tsang squeeze over an explicitly
 * seeded 64-bit Mersenne Twister). The same seed always yields the same
 * sequence. */
std::vector<double> sample_gamma(const GammaParams& params, std::size_t n,
                                 std::uint64_t seed);

struct FitReport {
    GammaParams params;
    std::int64_t n_samples = 0;
    double ks_statistic = 0.0;
    bool ks_pass = false;
    bool pooled = false;
};

/* Fitted vocabulary: per-word gamma parameters at a fixed reference
 * length, plus the corpus-level quantities needed to rescale them to an
 * arbitrary target text. */
struct FitEntry {
    double shape = 0.0;
    double rate = 0.0;
    std::int64_t n_samples = 0;
    double ks_statistic = -1.0;  // -1 when not evaluated
    bool pooled = false;
};

struct FitTable {
    std::map<std::string, FitEntry> words;
    std::int64_t fit_l0 = 0;         // reference length the parameters refer to
    std::int64_t corpus_length = 0;  // total token count of the fitted corpus
    std::int64_t corpus_docs = 0;
    double b_shared = 0.0;           // pooled rate, fit_l0 units
    bool b_shared_defaulted = false; // pool was empty or degenerate
};

/* Tab-separated persistence with a fixed 12-significant-digit numeric
 * format; loading and re-saving reproduces the bytes. */
void save_fit_table(const FitTable& table, const std::filesystem::path& path);
FitTable load_fit_table(const std::filesystem::path& path);

}  // namespace textthermo
