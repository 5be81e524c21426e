#include "textthermo/grammar.hpp"

#include <cmath>
#include <ostream>

#include "textthermo/errors.hpp"

namespace textthermo {

namespace {

void check_spec(const GrammarSpec& spec) {
    if (!(spec.continuation_p >= 0.0) || spec.continuation_p >= 1.0)
        throw DomainError("continuation probability must lie in [0, 1)");
    if (spec.target_word.empty() || spec.filler_word.empty())
        throw DomainError("grammar words must be non-empty");
    if (spec.target_word == spec.filler_word)
        throw DomainError("target and filler words must differ");
}

/* 53-bit uniform in [0, 1); avoids libm so the draw sequence is
 * bit-identical everywhere. */
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

}  // namespace

std::vector<std::string> generate_sentence(const GrammarSpec& spec,
                                           std::mt19937_64& rng) {
    check_spec(spec);
    std::vector<std::string> sentence{spec.target_word};
    while (uniform01(rng) < spec.continuation_p)
        sentence.push_back(spec.filler_word);
    return sentence;
}

CountTable generate_text(const GrammarSpec& spec, std::int64_t length,
                         std::mt19937_64& rng) {
    check_spec(spec);
    if (length < 1)
        throw DomainError("text length must be at least 1");
    std::int64_t fillers = 0;
    for (std::int64_t i = 1; i < length; ++i)
        if (uniform01(rng) < spec.continuation_p)
            ++fillers;
    CountTable t;
    t.counts[spec.target_word] = length - fillers;
    if (fillers > 0)
        t.counts[spec.filler_word] = fillers;
    t.length = length;
    t.doc_count = 1;
    return t;
}

void write_text_tokens(const GrammarSpec& spec, std::int64_t length,
                       std::mt19937_64& rng, std::ostream& out) {
    check_spec(spec);
    if (length < 1)
        throw DomainError("text length must be at least 1");
    out << spec.target_word;
    for (std::int64_t i = 1; i < length; ++i) {
        if (uniform01(rng) < spec.continuation_p)
            out << ' ' << spec.filler_word;
        else
            out << '\n' << spec.target_word;
    }
    out << '\n';
}

std::uint64_t derive_text_seed(std::uint64_t base_seed, std::uint64_t index) {
    std::uint64_t z = base_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

FitReport validate_gamma(const GrammarSpec& spec, std::int64_t n_texts,
                         std::int64_t length, double alpha,
                         std::uint64_t seed) {
    check_spec(spec);
    if (n_texts < 100)
        throw InsufficientDataError("gamma validation needs at least 100 texts");
    if (length < 1)
        throw DomainError("text length must be at least 1");

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(n_texts));
    for (std::int64_t i = 0; i < n_texts; ++i) {
        std::mt19937_64 rng(derive_text_seed(seed, static_cast<std::uint64_t>(i)));
        const CountTable t = generate_text(spec, length, rng);
        samples.push_back(normalize_count(t.at(spec.target_word), length, length));
    }

    FitReport report;
    report.params = fit_gamma(samples);
    report.n_samples = n_texts;
    const KsResult ks = ks_test(samples, report.params, alpha);
    report.ks_statistic = ks.statistic;
    report.ks_pass = ks.pass;
    report.pooled = false;
    return report;
}

}  // namespace textthermo
