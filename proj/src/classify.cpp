#include "textthermo/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "textthermo/errors.hpp"

namespace textthermo {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty())
        return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    if (v.size() % 2 == 1)
        return v[h];
    return 0.5 * (v[h - 1] + v[h]);
}

WordAnalysis analyze_word(const std::string& word, std::int64_t text_count,
                          const FitTable& fits, std::int64_t text_length,
                          const std::vector<double>& grid) {
    const WordParams wp = word_params(fits, word, text_length);
    WordAnalysis a;
    a.word = word;
    a.text_count = text_count;
    a.vocab_freq = wp.vocab_freq;
    a.rate = wp.rate;
    a.smoothed = wp.smoothed;
    a.features =
        curve_features(thermo_curve(text_count, wp.vocab_freq, wp.rate, grid));
    return a;
}

}  // namespace

CvFeatures curve_features(const ThermoCurve& curve) {
    if (curve.points.empty())
        throw DomainError("cannot extract features from an empty curve");
    CvFeatures f;
    f.peak_cv = curve.points.front().specific_heat;
    f.peak_beta = curve.points.front().beta;
    for (const ThermoPoint& p : curve.points) {
        if (p.specific_heat > f.peak_cv) {
            f.peak_cv = p.specific_heat;
            f.peak_beta = p.beta;
        }
    }
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const ThermoPoint& a = curve.points[i - 1];
        const ThermoPoint& b = curve.points[i];
        f.curve_mass += 0.5 * (a.specific_heat + b.specific_heat) *
                        (std::log(b.beta) - std::log(a.beta));
    }
    return f;
}

std::string to_string(WordClass c) {
    switch (c) {
        case WordClass::Term: return "term";
        case WordClass::FunctionWord: return "function_word";
        case WordClass::CommonWord: return "common_word";
    }
    return "common_word";
}

ClosedClassList load_closed_class_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open closed-class list: " + path.string());
    ClosedClassList list;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        list.insert(line);
    }
    if (list.empty())
        throw IoError("closed-class list is empty: " + path.string());
    return list;
}

WordParams word_params(const FitTable& fits, const std::string& word,
                       std::int64_t text_length) {
    if (text_length < 1)
        throw DomainError("text length must be at least 1");
    if (fits.fit_l0 < 1)
        throw DomainError("fit table has no reference length");
    const double scale =
        static_cast<double>(text_length) / static_cast<double>(fits.fit_l0);

    const auto it = fits.words.find(word);
    if (it != fits.words.end()) {
        WordParams wp;
        wp.vocab_freq = it->second.shape / it->second.rate * scale;
        wp.rate = it->second.rate / scale;
        wp.smoothed = false;
        return wp;
    }
    if (fits.corpus_length < 1)
        throw DomainError("fit table has no corpus length, cannot smooth");
    WordParams wp;
    wp.vocab_freq = static_cast<double>(text_length) /
                    static_cast<double>(fits.corpus_length);
    wp.rate = fits.b_shared / scale;
    wp.smoothed = true;
    return wp;
}

std::vector<WordAnalysis> rank_keywords(const CountTable& text,
                                        const FitTable& fits,
                                        const ClosedClassList& closed,
                                        const std::vector<double>& grid,
                                        std::size_t top_k) {
    if (text.counts.empty() || text.length < 1)
        throw InsufficientDataError("text has no words to analyze");

    std::vector<WordAnalysis> ranked;
    for (const auto& [word, n] : text.counts) {
        if (closed.count(word))
            continue;
        ranked.push_back(analyze_word(word, n, fits, text.length, grid));
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const WordAnalysis& a, const WordAnalysis& b) {
                  if (a.features.peak_cv != b.features.peak_cv)
                      return a.features.peak_cv > b.features.peak_cv;
                  return a.word < b.word;
              });
    if (top_k > 0 && ranked.size() > top_k)
        ranked.resize(top_k);
    return ranked;
}

ClassReference closed_class_reference(const CountTable& text,
                                      const FitTable& fits,
                                      const ClosedClassList& closed,
                                      const std::vector<double>& grid) {
    ClassReference ref;
    for (const auto& [word, n] : text.counts) {
        if (!closed.count(word))
            continue;
        ref.peaks.push_back(
            analyze_word(word, n, fits, text.length, grid).features.peak_cv);
    }
    if (ref.peaks.empty()) {
        /* No closed-class word in this text: measure the listed words
         * that the fitted corpus does know, at the counts they would
         * typically have here. */
        ref.corpus_fallback = true;
        const std::int64_t len = text.length > 0 ? text.length : fits.fit_l0;
        for (const std::string& word : closed) {
            const auto it = fits.words.find(word);
            if (it == fits.words.end())
                continue;
            const WordParams wp = word_params(fits, word, len);
            const std::int64_t n =
                std::max<std::int64_t>(1, std::llround(wp.vocab_freq));
            ref.peaks.push_back(
                curve_features(thermo_curve(n, wp.vocab_freq, wp.rate, grid))
                    .peak_cv);
        }
    }
    ref.median_peak = median_of(ref.peaks);
    return ref;
}

WordClassLabel label_word(const std::string& word, const CvFeatures& features,
                          const ClassReference& reference,
                          const ClosedClassList& closed, double tau) {
    if (!(tau > 0.0))
        throw DomainError("tau must be positive");
    WordClassLabel out;
    out.score = features.peak_cv / std::max(reference.median_peak, 1e-12);
    if (closed.count(word)) {
        out.cls = WordClass::FunctionWord;
        return out;
    }
    if (features.peak_cv > 0.0 &&
        features.peak_cv >= tau * reference.median_peak)
        out.cls = WordClass::Term;
    else
        out.cls = WordClass::CommonWord;
    return out;
}

}  // namespace textthermo
