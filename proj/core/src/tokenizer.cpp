#include "rtpol/tokenizer.hpp"

#include <fstream>

#include "rtpol/error.hpp"

namespace rtpol {

namespace {

// Decodes one code point starting at s[i]; advances i. Invalid bytes decode as
// themselves so malformed input never stalls the scanner.
char32_t next_code_point(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = b0;
    if (b0 >= 0xF0 && b0 < 0xF8) {
        extra = 3;
        cp = b0 & 0x07;
    } else if (b0 >= 0xE0) {
        extra = 2;
        cp = b0 & 0x0F;
    } else if (b0 >= 0xC0) {
        extra = 1;
        cp = b0 & 0x1F;
    }
    if (i + extra >= s.size() && extra > 0) {
        ++i;
        return b0;
    }
    for (int k = 1; k <= extra; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return b0;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += 1 + extra;
    return cp;
}

bool is_separator(char32_t cp) {
    if (cp < 0x80) {
        if (cp <= 0x20 || cp == 0x7F) return true;
        const char c = static_cast<char>(cp);
        const bool alnum = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
        return !alnum && c != '_';
    }
    switch (cp) {
    case 0x00A0: case 0x00AB: case 0x00BB: case 0x2013: case 0x2014: case 0x2018:
    case 0x2019: case 0x201C: case 0x201D: case 0x2026: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000: case 0x3001: case 0x3002: case 0x300C:
    case 0x300D: case 0x300E: case 0x300F: case 0x3010: case 0x3011: case 0x30FB:
    case 0xFEFF: case 0xFF01: case 0xFF08: case 0xFF09: case 0xFF0C: case 0xFF0E:
    case 0xFF1A: case 0xFF1B: case 0xFF1F:
        return true;
    default:
        return cp >= 0x2000 && cp <= 0x200B;
    }
}

bool starts_with(std::string_view s, std::string_view p) {
    return s.size() >= p.size() && s.substr(0, p.size()) == p;
}

} // namespace

std::string case_fold(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

bool contains_folded(std::string_view folded_text, std::string_view folded_keyword) {
    return folded_text.find(folded_keyword) != std::string_view::npos;
}

std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size();) {
        next_code_point(s, i);
        ++n;
    }
    return n;
}

std::vector<std::string> DelimiterTokenizer::tokenize(std::string_view text) const {
    const std::string folded = case_fold(text);
    std::vector<std::string> tokens;
    std::string current;
    std::size_t chunk_start = 0;
    bool skipping_chunk = false;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };
    std::string_view view(folded);
    std::size_t i = 0;
    if (starts_with(view, "rt") && (view.size() == 2 || view[2] == ' ' || view[2] == ':')) i = 2; // retweet marker
    chunk_start = i;
    while (i < view.size()) {
        const std::size_t at = i;
        const char32_t cp = next_code_point(view, i);
        const bool whitespace = cp <= 0x20 || cp == 0x3000 || cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200B);
        if (whitespace) {
            flush();
            skipping_chunk = false;
            chunk_start = i;
            continue;
        }
        if (at == chunk_start) {
            const std::string_view rest = view.substr(at);
            skipping_chunk = starts_with(rest, "http://") || starts_with(rest, "https://") || cp == U'@';
        }
        if (skipping_chunk) continue;
        if (is_separator(cp)) {
            flush();
        } else {
            current.append(view.substr(at, i - at));
        }
    }
    flush();
    return tokens;
}

StopwordSet load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read stopword list: " + path);
    StopwordSet words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
        std::size_t b = 0;
        while (b < line.size() && (line[b] == ' ' || line[b] == '\t')) ++b;
        line = line.substr(b);
        if (line.empty() || line[0] == '#') continue;
        words.insert(case_fold(line));
    }
    return words;
}

const std::vector<std::string>& default_stopword_list() {
    static const std::vector<std::string> words = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are", "as", "at",
    "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can", "could",
    "did", "do", "does", "doing", "down", "during", "each", "few", "for", "from", "further", "had", "has",
    "have", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "i", "if", "in",
    "into", "is", "it", "its", "itself", "just", "me", "more", "most", "my", "myself", "no", "nor", "not",
    "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "out", "over", "own", "same",
    "she", "should", "so", "some", "such", "than", "that", "the", "their", "theirs", "them", "then", "there",
    "these", "they", "this", "those", "through", "to", "too", "under", "until", "up", "very", "was", "we",
    "were", "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with", "would", "you",
    "your", "yours", "yourself", "rt", "via", "amp", "new", "like", "get", "got", "one", "also", "still",
    "really",
    };
    return words;
}

StopwordSet default_stopwords() {
    const auto& list = default_stopword_list();
    return StopwordSet(list.begin(), list.end());
}

} // namespace rtpol
