#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "textthermo/classify.hpp"
#include "textthermo/corpus.hpp"
#include "textthermo/distfit.hpp"
#include "textthermo/errors.hpp"
#include "textthermo/grammar.hpp"
#include "textthermo/thermo.hpp"

namespace fs = std::filesystem;
using namespace textthermo;

namespace texttool {

namespace {

std::string g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("read failed: " + path.string());
    return ss.str();
}

/* A text argument may be a raw document or an already-saved count
 * table; the table format announces itself on the first line. */
CountTable load_text_any(const std::string& path) {
    const std::string bytes = read_file(path);
    if (bytes.rfind("# counttable", 0) == 0)
        return load_count_table(path);
    const CountTable t = count_tokens(tokenize(bytes));
    if (t.length == 0)
        throw InsufficientDataError("no tokens in: " + path);
    return t;
}

bool hidden_name(const fs::path& p) {
    const std::string name = p.filename().string();
    return !name.empty() && name.front() == '.';
}

/* Expand files and directories into a sorted, duplicate-free file list. */
std::vector<fs::path> collect_files(const std::vector<std::string>& inputs,
                                    bool counts_only) {
    std::vector<fs::path> files;
    for (const std::string& raw : inputs) {
        const fs::path p(raw);
        if (fs::is_regular_file(p)) {
            files.push_back(p);
            continue;
        }
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::recursive_directory_iterator(p)) {
                if (!entry.is_regular_file() || hidden_name(entry.path()))
                    continue;
                const bool is_counts = entry.path().extension() == ".counts";
                if (counts_only != is_counts)
                    continue;
                if (counts_only &&
                    entry.path().filename() == "vocabulary.counts")
                    continue;
                files.push_back(entry.path());
            }
            continue;
        }
        throw IoError("no such file or directory: " + raw);
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.generic_string() < b.generic_string();
              });
    files.erase(std::unique(files.begin(), files.end()), files.end());
    return files;
}

bool same_file(const fs::path& a, const fs::path& b) {
    std::error_code ec;
    return fs::equivalent(a, b, ec) && !ec;
}

}  // namespace

std::vector<double> beta_grid_of(const ToolConfig& cfg) {
    return make_beta_grid(cfg.beta_min, cfg.beta_max, cfg.beta_points);
}

void cmd_ingest(const std::vector<std::string>& inputs, const std::string& out_dir,
                const std::vector<std::string>& exclude) {
    const std::vector<fs::path> files = collect_files(inputs, false);
    if (files.empty())
        throw IoError("no input files found");

    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    std::vector<CountTable> vocab_parts;
    std::set<std::string> used_names;
    std::size_t ok = 0;
    std::size_t failed = 0;

    for (const fs::path& file : files) {
        CountTable table;
        try {
            table = count_tokens(tokenize(read_file(file)));
            if (table.length == 0)
                throw IoError("no tokens");
        } catch (const std::exception& e) {
            std::cerr << "ingest: " << file.string() << ": " << e.what() << "\n";
            ++failed;
            continue;
        }

        std::string stem = file.stem().string();
        if (stem.empty())
            stem = "text";
        std::string name = stem;
        for (int suffix = 2; used_names.count(name); ++suffix)
            name = stem + "-" + std::to_string(suffix);
        used_names.insert(name);

        save_count_table(table, out / (name + ".counts"));
        std::cout << name << ".counts\t" << table.length << " tokens\t"
                  << table.counts.size() << " distinct\t" << file.string()
                  << "\n";

        const bool excluded =
            std::any_of(exclude.begin(), exclude.end(),
                        [&](const std::string& e) { return same_file(e, file); });
        if (!excluded)
            vocab_parts.push_back(std::move(table));
        ++ok;
    }

    if (ok == 0)
        throw IoError("all " + std::to_string(failed) + " input files failed");

    const CountTable vocab = merge(vocab_parts);
    if (vocab.length == 0) {
        std::cerr << "ingest: every text was excluded, vocabulary not written\n";
        return;
    }
    save_count_table(vocab, out / "vocabulary.counts");
    std::cout << "vocabulary.counts\t" << vocab.length << " tokens\t"
              << vocab.counts.size() << " distinct\t" << vocab.doc_count
              << " texts\n";
}

void cmd_fit(const std::vector<std::string>& inputs, const std::string& out_file,
             const ToolConfig& cfg) {
    const std::vector<fs::path> files = collect_files(inputs, true);
    if (files.empty())
        throw InsufficientDataError("no count tables found");

    std::vector<CountTable> texts;
    texts.reserve(files.size());
    for (const fs::path& f : files)
        texts.push_back(load_count_table(f));

    FitTable table;
    table.fit_l0 = cfg.fit_l0;
    for (const CountTable& t : texts) {
        table.corpus_length += t.length;
        table.corpus_docs += t.doc_count;
    }

    std::set<std::string> universe;
    for (const CountTable& t : texts)
        for (const auto& [word, n] : t.counts)
            universe.insert(word);

    /* Frequent words get their own fit; the rest share a pooled rate.
     * Words whose individual fit degenerates fall back to the pool too. */
    std::map<std::string, std::vector<double>> pool_samples;
    std::map<std::string, double> pool_means;
    std::size_t ks_passed = 0;
    std::size_t ks_tested = 0;

    for (const std::string& word : universe) {
        const std::vector<double> samples = per_text_samples(texts, word, cfg.fit_l0);
        std::vector<double> positive;
        double sum = 0.0;
        for (double x : samples)
            if (x > 0.0) {
                positive.push_back(x);
                sum += x;
            }
        const double mean = sum / static_cast<double>(positive.size());

        if (static_cast<double>(positive.size()) >= cfg.frequency_floor) {
            try {
                const GammaParams params = fit_gamma(positive, 2);
                FitEntry e;
                e.shape = params.shape;
                e.rate = params.rate;
                e.n_samples = static_cast<std::int64_t>(positive.size());
                e.pooled = false;
                if (positive.size() >= 5) {
                    const KsResult ks = ks_test(positive, params, cfg.ks_alpha);
                    e.ks_statistic = ks.statistic;
                    ++ks_tested;
                    if (ks.pass)
                        ++ks_passed;
                }
                table.words[word] = e;
                continue;
            } catch (const DegenerateDataError&) {
                /* fall through to the pool */
            }
        }
        pool_samples[word] = positive;
        pool_means[word] = mean;
    }

    if (!pool_samples.empty()) {
        try {
            const PooledFit pf = fit_pooled_b(
                pool_samples, std::numeric_limits<double>::infinity());
            table.b_shared = pf.b_shared;
        } catch (const DegenerateDataError&) {
            table.b_shared = 1.0;
            table.b_shared_defaulted = true;
            std::cerr << "fit: pooled samples are degenerate, "
                         "falling back to a shared rate of 1\n";
        }
    } else {
        /* Nothing to pool; take the median individual rate so smoothing
         * of unseen words still has a rate to work with. */
        std::vector<double> rates;
        for (const auto& [word, e] : table.words)
            rates.push_back(e.rate);
        std::sort(rates.begin(), rates.end());
        table.b_shared = rates[rates.size() / 2];
        table.b_shared_defaulted = true;
    }

    for (const auto& [word, mean] : pool_means) {
        FitEntry e;
        e.shape = table.b_shared * mean;
        e.rate = table.b_shared;
        e.n_samples = static_cast<std::int64_t>(pool_samples[word].size());
        e.pooled = true;
        table.words[word] = e;
    }

    save_fit_table(table, out_file);
    std::cout << "fit " << table.words.size() << " words from " << texts.size()
              << " texts (" << table.corpus_length << " tokens) at l0="
              << table.fit_l0 << "\n";
    std::cout << "individual fits: " << (table.words.size() - pool_means.size())
              << ", pooled: " << pool_means.size() << ", shared rate b="
              << g12(table.b_shared)
              << (table.b_shared_defaulted ? " (defaulted)" : "") << "\n";
    if (ks_tested > 0)
        std::cout << "ks pass rate at alpha=" << g12(cfg.ks_alpha) << ": "
                  << ks_passed << "/" << ks_tested << "\n";
}

void cmd_thermo(const std::string& word, const std::string& fits_path,
                const std::string& text_path, const std::string& out_path,
                const ToolConfig& cfg) {
    const FitTable fits = load_fit_table(fits_path);
    const CountTable text = load_text_any(text_path);
    const std::int64_t n_t = text.at(word);
    if (n_t == 0)
        throw InsufficientDataError("word '" + word +
                                    "' does not occur in the text");
    const WordParams wp = word_params(fits, word, text.length);
    const ThermoCurve curve =
        thermo_curve(n_t, wp.vocab_freq, wp.rate, beta_grid_of(cfg));

    if (out_path == "-") {
        write_curve_csv(curve, word, std::cout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + out_path);
    write_curve_csv(curve, word, out);
    if (!out.flush())
        throw IoError("write failed: " + out_path);
}

void cmd_keywords(const std::string& text_path, const std::string& fits_path,
                  const std::string& out_path, bool json_output,
                  const ToolConfig& cfg) {
    const FitTable fits = load_fit_table(fits_path);
    const ClosedClassList closed = load_closed_class_list(cfg.closed_class_path);
    const CountTable text = load_text_any(text_path);
    const std::vector<double> grid = beta_grid_of(cfg);

    const std::vector<WordAnalysis> ranked =
        rank_keywords(text, fits, closed, grid, cfg.top_k);
    const ClassReference ref = closed_class_reference(text, fits, closed, grid);
    if (ranked.empty())
        std::cerr << "keywords: nothing to rank, the text holds only "
                     "closed-class words\n";

    std::ostringstream body;
    const char* ref_source = ref.corpus_fallback ? "corpus_fallback" : "text";
    if (json_output) {
        nlohmann::ordered_json doc;
        doc["reference"] = {{"source", ref_source},
                            {"median_peak_cv", ref.median_peak},
                            {"tau", cfg.tau}};
        doc["keywords"] = nlohmann::ordered_json::array();
        std::size_t rank = 1;
        for (const WordAnalysis& a : ranked) {
            const WordClassLabel lab =
                label_word(a.word, a.features, ref, closed, cfg.tau);
            doc["keywords"].push_back({{"rank", rank++},
                                       {"word", a.word},
                                       {"n_t", a.text_count},
                                       {"N_v", a.vocab_freq},
                                       {"b", a.rate},
                                       {"peak_cv", a.features.peak_cv},
                                       {"peak_beta", a.features.peak_beta},
                                       {"label", to_string(lab.cls)}});
        }
        body << doc.dump(2) << "\n";
    } else {
        body << "# reference=" << ref_source << " median_peak_cv="
             << g12(ref.median_peak) << " tau=" << g12(cfg.tau) << "\n";
        body << "rank,word,n_t,N_v,b,peak_cv,peak_beta,label\n";
        std::size_t rank = 1;
        for (const WordAnalysis& a : ranked) {
            const WordClassLabel lab =
                label_word(a.word, a.features, ref, closed, cfg.tau);
            body << rank++ << ',' << a.word << ',' << a.text_count << ','
                 << g12(a.vocab_freq) << ',' << g12(a.rate) << ','
                 << g12(a.features.peak_cv) << ',' << g12(a.features.peak_beta)
                 << ',' << to_string(lab.cls) << "\n";
        }
    }

    if (out_path == "-") {
        std::cout << body.str();
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + out_path);
    out << body.str();
    if (!out.flush())
        throw IoError("write failed: " + out_path);
}

void cmd_simulate(double p, std::int64_t n_texts, std::int64_t length,
                  const std::string& out_dir, const ToolConfig& cfg) {
    if (n_texts < 1)
        throw DomainError("need at least one text");
    const GrammarSpec spec{p, "w", "v"};

    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    std::size_t width = 4;
    for (std::int64_t v = n_texts; v >= 10000; v /= 10)
        ++width;

    for (std::int64_t i = 0; i < n_texts; ++i) {
        std::mt19937_64 rng(
            derive_text_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        std::string num = std::to_string(i + 1);
        if (num.size() < width)
            num.insert(0, width - num.size(), '0');
        const std::string name = "simtext-" + num + ".txt";
        std::ofstream f(out / name, std::ios::binary);
        if (!f)
            throw IoError("cannot open for writing: " + (out / name).string());
        write_text_tokens(spec, length, rng, f);
        if (!f.flush())
            throw IoError("write failed: " + (out / name).string());
    }
    std::cout << "wrote " << n_texts << " texts of " << length
              << " tokens to " << out_dir << "\n";

    /* The validator regenerates the same counts from the same per-text
     * seeds, so the report describes exactly the files written above. */
    try {
        const FitReport r =
            validate_gamma(spec, n_texts, length, cfg.ks_alpha, cfg.seed);
        std::cout << "target word fit: a=" << g12(r.params.shape)
                  << " b=" << g12(r.params.rate) << " over " << r.n_samples
                  << " texts\n";
        std::cout << "ks statistic " << g12(r.ks_statistic) << " at alpha="
                  << g12(cfg.ks_alpha) << ": "
                  << (r.ks_pass ? "pass" : "FAIL") << "\n";
    } catch (const InsufficientDataError& e) {
        std::cerr << "gamma validation skipped: " << e.what() << "\n";
    } catch (const DegenerateDataError& e) {
        std::cerr << "gamma validation skipped: " << e.what() << "\n";
    }
}

}  // namespace texttool
