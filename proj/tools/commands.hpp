#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace texttool {

/* Settings shared across the subcommands. Filled from an optional JSON
 * config file, then overridden by command-line flags. */
struct ToolConfig {
    std::int64_t fit_l0 = 10000;     // reference length the vocabulary is fit at
    double beta_min = 1e-2;
    double beta_max = 1e2;
    std::size_t beta_points = 200;
    double frequency_floor = 30.0;   // texts with positive count needed for an individual fit
    double tau = 5.0;                // term threshold over the closed-class median peak
    std::string closed_class_path;
    double ks_alpha = 0.01;
    std::uint64_t seed = 1;
    std::size_t top_k = 20;
};

std::vector<double> beta_grid_of(const ToolConfig& cfg);

/* Tokenize input files into per-text count tables plus a merged
 * vocabulary table. Paths named in `exclude` are still counted but kept
 * out of the vocabulary. */
void cmd_ingest(const std::vector<std::string>& inputs, const std::string& out_dir,
                const std::vector<std::string>& exclude);

/* Fit the per-word gamma law over a collection of count tables and save
 * the resulting table. */
void cmd_fit(const std::vector<std::string>& inputs, const std::string& out_file,
             const ToolConfig& cfg);

/* Thermodynamic sweep of one word of one text, written as CSV. */
void cmd_thermo(const std::string& word, const std::string& fits_path,
                const std::string& text_path, const std::string& out_path,
                const ToolConfig& cfg);

/* Ranked keyword report for a text against a fitted vocabulary. */
void cmd_keywords(const std::string& text_path, const std::string& fits_path,
                  const std::string& out_path, bool json_output,
                  const ToolConfig& cfg);

/* Generate a synthetic corpus from the two-word grammar and report how
 * well the target word's counts follow a gamma law. */
void cmd_simulate(double p, std::int64_t n_texts, std::int64_t length,
                  const std::string& out_dir, const ToolConfig& cfg);

}  // namespace texttool
