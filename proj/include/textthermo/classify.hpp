#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "textthermo/corpus.hpp"
#include "textthermo/distfit.hpp"
#include "textthermo/thermo.hpp"

namespace textthermo {

/* Shape summary of one word's specific-heat curve. */
struct CvFeatures {
    double peak_cv = 0.0;
    double peak_beta = 0.0;   // grid point where the peak sits
    double curve_mass = 0.0;  // trapezoidal integral of Cv over log beta
};

/* Peak and mass of the curve; ties on the peak go to the smaller beta. */
CvFeatures curve_features(const ThermoCurve& curve);

enum class WordClass { Term, FunctionWord, CommonWord };

std::string to_string(WordClass c);

/* One lowercase word per line; '#' lines and blank lines are skipped. */
using ClosedClassList = std::set<std::string>;
ClosedClassList load_closed_class_list(const std::filesystem::path& path);

inline constexpr double kDefaultTau = 5.0;

/* Vocabulary parameters for one word, rescaled from the fit table's
 * reference length to the analyzed text's length. Words missing from the
 * table get one pseudo-occurrence spread over the whole fitted corpus
 * and the shared pooled rate. */
struct WordParams {
    double vocab_freq = 0.0;
    double rate = 0.0;
    bool smoothed = false;
};

WordParams word_params(const FitTable& fits, const std::string& word,
                       std::int64_t text_length);

struct WordAnalysis {
    std::string word;
    std::int64_t text_count = 0;
    double vocab_freq = 0.0;
    double rate = 0.0;
    CvFeatures features;
    bool smoothed = false;
};

/* Every non-closed-class word of the text, ordered by peak_cv descending
 * with lexicographic tie-break, cut to top_k entries (top_k = 0 keeps
 * all). A text containing only closed-class words yields an empty list. */
std::vector<WordAnalysis> rank_keywords(const CountTable& text,
                                        const FitTable& fits,
                                        const ClosedClassList& closed,
                                        const std::vector<double>& grid,
                                        std::size_t top_k = 0);

/* Peak statistics of the closed-class words, the yardstick terms are
 * measured against. Falls back to table-wide closed-class entries (at
 * their expected in-text counts) when the text itself has none. */
struct ClassReference {
    std::vector<double> peaks;
    double median_peak = 0.0;
    bool corpus_fallback = false;
};

ClassReference closed_class_reference(const CountTable& text,
                                      const FitTable& fits,
                                      const ClosedClassList& closed,
                                      const std::vector<double>& grid);

struct WordClassLabel {
    WordClass cls = WordClass::CommonWord;
    double score = 0.0;  // peak_cv over the reference median
};

/* Closed-class membership wins; otherwise a word is a term when its peak
 * is positive and at least tau times the reference median. */
WordClassLabel label_word(const std::string& word, const CvFeatures& features,
                          const ClassReference& reference,
                          const ClosedClassList& closed,
                          double tau = kDefaultTau);

}  // namespace textthermo
