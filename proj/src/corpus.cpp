#include "textthermo/corpus.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "textthermo/errors.hpp"

namespace textthermo {

namespace {

struct CpRange {
    char32_t lo, hi;
};

/* Alphabetic codepoint ranges: ASCII letters plus the Latin supplements,
 * IPA, Greek, Cyrillic and Hebrew/Arabic base blocks. Anything outside
 * these ranges acts as a separator. */
constexpr std::array<CpRange, 14> kLetterRanges = {{
    {0x0041, 0x005A}, {0x0061, 0x007A},  // ASCII
    {0x00AA, 0x00AA}, {0x00B5, 0x00B5}, {0x00BA, 0x00BA},
    {0x00C0, 0x00D6}, {0x00D8, 0x00F6}, {0x00F8, 0x02AF},
    {0x0386, 0x0386}, {0x0388, 0x03FF},  // Greek
    {0x0400, 0x052F},                    // Cyrillic
    {0x0531, 0x0556}, {0x0561, 0x0587},  // Armenian
    {0x05D0, 0x05EA},                    // Hebrew
}};

bool is_letter(char32_t cp) {
    for (const auto& r : kLetterRanges)
        if (cp >= r.lo && cp <= r.hi)
            return true;
    return false;
}

char32_t to_lower(char32_t cp) {
    if (cp >= 0x41 && cp <= 0x5A)
        return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7)
        return cp + 0x20;
    /* Latin Extended-A/B mostly pairs upper/lower codepoints */
    if ((cp >= 0x0100 && cp <= 0x0137) || (cp >= 0x014A && cp <= 0x0177))
        return (cp % 2 == 0) ? cp + 1 : cp;
    if ((cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E))
        return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp == 0x0130)
        return 0x69;  // dotted capital I
    if (cp == 0x0178)
        return 0xFF;  // Y with diaeresis
    if (cp >= 0x0391 && cp <= 0x03AB && cp != 0x03A2)
        return cp + 0x20;
    if (cp == 0x0386)
        return 0x03AC;
    if (cp >= 0x0388 && cp <= 0x038A)
        return cp + 0x25;
    if (cp >= 0x0410 && cp <= 0x042F)
        return cp + 0x20;
    if (cp >= 0x0400 && cp <= 0x040F)
        return cp + 0x50;
    if (cp >= 0x0531 && cp <= 0x0556)
        return cp + 0x30;
    return cp;
}

/* Decode one UTF-8 codepoint at s[i]. Returns false on malformed input,
 * in which case the caller skips a single byte. */
bool decode_utf8(std::string_view s, std::size_t i, char32_t& cp, std::size_t& len) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        cp = b0;
        len = 1;
        return true;
    }
    int extra;
    char32_t acc;
    if ((b0 & 0xE0) == 0xC0) {
        extra = 1;
        acc = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        extra = 2;
        acc = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        extra = 3;
        acc = b0 & 0x07;
    } else {
        return false;
    }
    if (i + extra >= s.size())
        return false;
    for (int k = 1; k <= extra; ++k) {
        const unsigned char b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80)
            return false;
        acc = (acc << 6) | (b & 0x3F);
    }
    /* reject overlong encodings and surrogates */
    static constexpr char32_t min_cp[4] = {0, 0x80, 0x800, 0x10000};
    if (acc < min_cp[extra] || acc > 0x10FFFF || (acc >= 0xD800 && acc <= 0xDFFF))
        return false;
    cp = acc;
    len = static_cast<std::size_t>(extra) + 1;
    return true;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp;
        std::size_t len;
        if (decode_utf8(text, i, cp, len) && is_letter(cp)) {
            append_utf8(current, to_lower(cp));
            i += len;
        } else {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
            i += decode_utf8(text, i, cp, len) ? len : 1;
        }
    }
    if (!current.empty())
        tokens.push_back(std::move(current));
    return tokens;
}

CountTable count_tokens(const std::vector<std::string>& tokens) {
    CountTable t;
    t.doc_count = 1;
    t.length = static_cast<std::int64_t>(tokens.size());
    for (const auto& tok : tokens)
        ++t.counts[tok];
    return t;
}

CountTable merge(const std::vector<CountTable>& parts) {
    CountTable out;
    for (const auto& p : parts) {
        for (const auto& [w, c] : p.counts)
            out.counts[w] += c;
        out.length += p.length;
        out.doc_count += p.doc_count;
    }
    return out;
}

double normalize_count(std::int64_t raw, std::int64_t source_length, std::int64_t l0) {
    if (source_length <= 0)
        throw DomainError("normalize_count: source_length must be positive");
    if (l0 <= 0)
        throw DomainError("normalize_count: l0 must be positive");
    if (raw < 0)
        throw DomainError("normalize_count: negative count");
    return static_cast<double>(l0) * static_cast<double>(raw) /
           static_cast<double>(source_length);
}

void save_count_table(const CountTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    out << "# counttable length=" << table.length << " docs=" << table.doc_count << "\n";
    for (const auto& [w, c] : table.counts)
        out << w << '\t' << c << '\n';
    if (!out)
        throw IoError("write failed: " + path.string());
}

CountTable load_count_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw IoError("empty count table file: " + path.string());
    CountTable t;
    if (std::sscanf(line.c_str(), "# counttable length=%lld docs=%lld",
                    reinterpret_cast<long long*>(&t.length),
                    reinterpret_cast<long long*>(&t.doc_count)) != 2)
        throw IoError("bad count table header: " + path.string());
    std::int64_t token_sum = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw IoError("bad count table line: " + path.string());
        const std::string word = line.substr(0, tab);
        std::int64_t c = 0;
        const char* first = line.data() + tab + 1;
        const char* last = line.data() + line.size();
        const auto [ptr, ec] = std::from_chars(first, last, c);
        if (ec != std::errc() || ptr != last || c <= 0)
            throw IoError("bad count value: " + path.string());
        if (!t.counts.emplace(word, c).second)
            throw IoError("duplicate word in count table: " + path.string());
        token_sum += c;
    }
    if (token_sum != t.length)
        throw IoError("count table header inconsistent with rows: " + path.string());
    return t;
}

}  // namespace textthermo
