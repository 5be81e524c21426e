#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "textthermo/corpus.hpp"
#include "textthermo/distfit.hpp"

namespace textthermo {

/* Two-terminal stochastic grammar. A sentence is one target word followed
 * by filler words, each appended with probability continuation_p. */
struct GrammarSpec {
    double continuation_p = 0.5;
    std::string target_word = "w";
    std::string filler_word = "v";
};

/* One sentence: the target word plus a geometric number of fillers,
 * P(j fillers) = p^j (1-p). */
std::vector<std::string> generate_sentence(const GrammarSpec& spec,
                                           std::mt19937_64& rng);

/* Counts for a text of exactly `length` tokens: sentences are emitted
 * back to back and the last one is cut at the length bound. One uniform
 * draw per token after the first, so generate_text and write_text_tokens
 * produce matching results from equal generator states. */
CountTable generate_text(const GrammarSpec& spec, std::int64_t length,
                         std::mt19937_64& rng);

/* Same construction, emitted as tokens (one sentence per line). The
 * output tokenizes back to exactly the table generate_text returns. */
void write_text_tokens(const GrammarSpec& spec, std::int64_t length,
                       std::mt19937_64& rng, std::ostream& out);

/* Stable per-text seed for independent parallel generation. */
std::uint64_t derive_text_seed(std::uint64_t base_seed, std::uint64_t index);

/* Generates n_texts texts of the given length, collects the target
 * word's per-text counts, fits a gamma law, and KS-tests the fit. */
FitReport validate_gamma(const GrammarSpec& spec, std::int64_t n_texts,
                         std::int64_t length, double alpha,
                         std::uint64_t seed);

}  // namespace textthermo
