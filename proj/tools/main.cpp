#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "textthermo/errors.hpp"

namespace {

using texttool::ToolConfig;

/* Command-line problems that are neither data nor numeric failures. */
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* An explicit --config always wins; the environment variable only
 * supplies the default path. */
std::string config_path_of(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc)
            return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0)
            return arg.substr(9);
    }
    if (const char* env = std::getenv("TEXTTHERMO_CONFIG"))
        return env;
    return {};
}

void apply_config_file(const std::string& path, ToolConfig& cfg) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("bad config file " + path + ": " + e.what());
    }
    if (!doc.is_object())
        throw UsageError("config file must hold a JSON object: " + path);
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "fit_l0")
                cfg.fit_l0 = value.get<std::int64_t>();
            else if (key == "beta_min")
                cfg.beta_min = value.get<double>();
            else if (key == "beta_max")
                cfg.beta_max = value.get<double>();
            else if (key == "beta_points")
                cfg.beta_points = value.get<std::size_t>();
            else if (key == "frequency_floor")
                cfg.frequency_floor = value.get<double>();
            else if (key == "tau")
                cfg.tau = value.get<double>();
            else if (key == "closed_class_list")
                cfg.closed_class_path = value.get<std::string>();
            else if (key == "ks_alpha")
                cfg.ks_alpha = value.get<double>();
            else if (key == "seed")
                cfg.seed = value.get<std::uint64_t>();
            else if (key == "top_k")
                cfg.top_k = value.get<std::size_t>();
            else
                throw UsageError("unknown config key: " + key);
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("bad config value in " + path + ": " + e.what());
    }
}

void check_config(const ToolConfig& cfg) {
    if (cfg.fit_l0 < 1)
        throw UsageError("fit_l0 must be a positive length");
    if (!(cfg.beta_min > 0.0) || !(cfg.beta_max > cfg.beta_min))
        throw UsageError("beta grid needs 0 < beta_min < beta_max");
    if (cfg.beta_points < 2)
        throw UsageError("beta_points must be at least 2");
    if (!(cfg.frequency_floor > 0.0))
        throw UsageError("frequency_floor must be positive");
    if (!(cfg.tau > 0.0))
        throw UsageError("tau must be positive");
    if (!(cfg.ks_alpha > 0.0) || !(cfg.ks_alpha < 1.0))
        throw UsageError("ks_alpha must lie in (0, 1)");
    if (cfg.top_k < 1)
        throw UsageError("top_k must be at least 1");
}

}  // namespace

int main(int argc, char** argv) {
    ToolConfig cfg;
    std::string config_echo;  // consumed here, applied in the pre-scan

    try {
        const std::string config_path = config_path_of(argc, argv);
        if (!config_path.empty())
            apply_config_file(config_path, cfg);
    } catch (const UsageError& e) {
        std::cerr << "texttherm: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"word-frequency thermodynamics: corpus statistics, gamma "
                 "fits, specific-heat curves, keyword extraction"};
    app.require_subcommand(1);

    const auto add_config_opt = [&](CLI::App* sub) {
        sub->add_option("--config", config_echo,
                        "JSON config file (flags override its values)");
    };
    const auto add_grid_opts = [&](CLI::App* sub) {
        sub->add_option("--beta-min", cfg.beta_min, "smallest inverse temperature")
            ->capture_default_str();
        sub->add_option("--beta-max", cfg.beta_max, "largest inverse temperature")
            ->capture_default_str();
        sub->add_option("--beta-points", cfg.beta_points,
                        "number of log-spaced grid points")
            ->capture_default_str();
    };

    std::vector<std::string> inputs;
    std::vector<std::string> exclude;
    std::string out_path = "-";
    std::string out_dir;
    std::string word;
    std::string fits_path;
    std::string text_path;
    bool json_output = false;
    double grammar_p = 0.5;
    std::int64_t n_texts = 1000;
    std::int64_t text_length = 10000;

    CLI::App* ingest = app.add_subcommand(
        "ingest", "tokenize texts into count tables plus a merged vocabulary");
    ingest->add_option("inputs", inputs, "text files or directories")
        ->required();
    ingest->add_option("--out-dir", out_dir, "directory for the .counts files")
        ->required();
    ingest->add_option("--exclude", exclude,
                       "paths of texts to keep out of the vocabulary table");
    add_config_opt(ingest);
    ingest->callback([&] {
        check_config(cfg);
        texttool::cmd_ingest(inputs, out_dir, exclude);
    });

    CLI::App* fit = app.add_subcommand(
        "fit", "fit per-word gamma frequency laws over count tables");
    fit->add_option("inputs", inputs, ".counts files or directories of them")
        ->required();
    fit->add_option("--out", out_path, "fit table to write")->required();
    fit->add_option("--fit-l0", cfg.fit_l0, "reference length for normalization")
        ->capture_default_str();
    fit->add_option("--floor", cfg.frequency_floor,
                    "texts with positive count needed for an individual fit")
        ->capture_default_str();
    fit->add_option("--alpha", cfg.ks_alpha, "KS significance level")
        ->capture_default_str();
    add_config_opt(fit);
    fit->callback([&] {
        check_config(cfg);
        texttool::cmd_fit(inputs, out_path, cfg);
    });

    CLI::App* thermo = app.add_subcommand(
        "thermo", "specific-heat and entropy curve of one word in one text");
    thermo->add_option("word", word, "word to analyze")->required();
    thermo->add_option("--fits", fits_path, "fit table")->required();
    thermo->add_option("--text", text_path, "text file or .counts table")
        ->required();
    thermo->add_option("--out", out_path, "output CSV path, - for stdout")
        ->capture_default_str();
    add_grid_opts(thermo);
    add_config_opt(thermo);
    thermo->callback([&] {
        check_config(cfg);
        texttool::cmd_thermo(word, fits_path, text_path, out_path, cfg);
    });

    CLI::App* keywords = app.add_subcommand(
        "keywords", "rank a text's words by specific-heat peak and label them");
    keywords->add_option("--text", text_path, "text file or .counts table")
        ->required();
    keywords->add_option("--fits", fits_path, "fit table")->required();
    keywords->add_option("--closed-class", cfg.closed_class_path,
                         "closed-class word list, one word per line");
    keywords->add_option("--top-k", cfg.top_k, "entries to keep")
        ->capture_default_str();
    keywords->add_option("--tau", cfg.tau,
                         "term threshold over the closed-class median peak")
        ->capture_default_str();
    keywords->add_flag("--json", json_output, "emit JSON instead of CSV");
    keywords->add_option("--out", out_path, "output path, - for stdout")
        ->capture_default_str();
    add_grid_opts(keywords);
    add_config_opt(keywords);
    keywords->callback([&] {
        check_config(cfg);
        if (cfg.closed_class_path.empty())
            throw UsageError(
                "a closed-class word list is required (--closed-class or config)");
        texttool::cmd_keywords(text_path, fits_path, out_path, json_output, cfg);
    });

    CLI::App* simulate = app.add_subcommand(
        "simulate", "generate a synthetic corpus from the two-word grammar");
    simulate->add_option("--p", grammar_p, "sentence continuation probability")
        ->capture_default_str();
    simulate->add_option("--n-texts", n_texts, "number of texts")
        ->capture_default_str();
    simulate->add_option("--length", text_length, "tokens per text")
        ->capture_default_str();
    simulate->add_option("--out-dir", out_dir, "directory for the token files")
        ->required();
    simulate->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    simulate->add_option("--alpha", cfg.ks_alpha, "KS significance level")
        ->capture_default_str();
    add_config_opt(simulate);
    simulate->callback([&] {
        check_config(cfg);
        texttool::cmd_simulate(grammar_p, n_texts, text_length, out_dir, cfg);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "texttherm: " << e.what() << "\n";
        return 1;
    } catch (const textthermo::IoError& e) {
        std::cerr << "texttherm: " << e.what() << "\n";
        return 2;
    } catch (const textthermo::InsufficientDataError& e) {
        std::cerr << "texttherm: " << e.what() << "\n";
        return 2;
    } catch (const textthermo::DegenerateDataError& e) {
        std::cerr << "texttherm: " << e.what() << "\n";
        return 2;
    } catch (const textthermo::DomainError& e) {
        std::cerr << "texttherm: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "texttherm: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
