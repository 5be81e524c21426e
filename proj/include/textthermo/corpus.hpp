#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace textthermo {

/* Split raw text into lowercased alphabetic tokens. A token is a maximal
 * run of letters; digits, punctuation, whitespace and malformed byte
 * sequences all separate. Case folding and the letter test cover ASCII
 * plus the common European alphabetic blocks (Latin-1/Extended, Greek,
 * Cyrillic). */
std::vector<std::string> tokenize(std::string_view text);

/* Word frequency table of one or more documents. */
struct CountTable {
    std::map<std::string, std::int64_t> counts;
    std::int64_t length = 0;     // total number of tokens
    std::int64_t doc_count = 0;  // number of source documents

    std::int64_t at(const std::string& word) const {
        auto it = counts.find(word);
        return it == counts.end() ? 0 : it->second;
    }
    bool operator==(const CountTable&) const = default;
};

/* Count one document's tokens (doc_count becomes 1). */
CountTable count_tokens(const std::vector<std::string>& tokens);

/* Sum counts, lengths and document counts. A default-constructed table
 * is the identity. Order of the parts does not matter. */
CountTable merge(const std::vector<CountTable>& parts);

/* Rescale a raw count from a text of source_length tokens to a reference
 * length l0. Exact when l0 == source_length. */
double normalize_count(std::int64_t raw, std::int64_t source_length, std::int64_t l0);

/* Plain-text persistence: a header line carrying length and doc_count,
 * then one "word<TAB>count" line per word in byte order. Loading the
 * saved file reproduces the table exactly, and saving it again
 * reproduces the bytes. */
void save_count_table(const CountTable& table, const std::filesystem::path& path);
CountTable load_count_table(const std::filesystem::path& path);

}  // namespace textthermo
