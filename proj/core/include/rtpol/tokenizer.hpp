#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace rtpol {

/// Lowercases ASCII letters; other code points pass through unchanged.
std::string case_fold(std::string_view text);

/// True when `keyword` occurs in `text` after case folding both.
bool contains_folded(std::string_view folded_text, std::string_view folded_keyword);

/// Number of UTF-8 code points in `s`.
std::size_t utf8_length(std::string_view s);

class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    /// Returns case-folded tokens in text order.
    virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
};

/// Splits on Unicode whitespace and on ASCII / CJK / general punctuation.
/// URLs, mentions and the retweet marker are stripped before splitting.
class DelimiterTokenizer final : public Tokenizer {
public:
    std::vector<std::string> tokenize(std::string_view text) const override;
};

using StopwordSet = std::unordered_set<std::string>;

/// One token per line, UTF-8. Blank lines and lines starting with '#' are ignored.
StopwordSet load_stopwords(const std::string& path);

/// Built-in English function words (the same list ships as data/stopwords_en.txt).
const std::vector<std::string>& default_stopword_list();
StopwordSet default_stopwords();

} // namespace rtpol
