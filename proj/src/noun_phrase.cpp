#include "gtr/noun_phrase.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace gtr {

namespace {

struct Token {
    std::size_t begin = 0;
    std::size_t end = 0;
    // True when only whitespace separates this token from the previous one.
    bool joined = false;
    PosTag tag = PosTag::Other;
};

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0 || c == '-' || c == '\'' || c >= 0x80; }

const std::unordered_map<std::string_view, PosTag>& lexicon() {
    static const auto table = [] {
        std::unordered_map<std::string_view, PosTag> t;
        for (std::string_view w : {"a", "an", "the", "his", "her", "their", "its", "this", "that",
                                   "these", "those", "some", "each", "another", "my", "your",
                                   "one", "two", "three", "several", "both", "any"}) {
            t.emplace(w, PosTag::Determiner);
        }
        for (std::string_view w :
             {"red",      "blue",      "green",     "yellow",   "black",     "white",
              "gray",     "grey",      "brown",     "pink",     "purple",    "orange",
              "blonde",   "blond",     "dark",      "light",    "navy",      "beige",
              "khaki",    "silver",    "golden",    "gold",     "long",      "short",
              "young",    "old",       "small",     "large",    "big",       "little",
              "tall",     "slim",      "thin",      "heavy",    "striped",   "plaid",
              "checked",  "denim",     "leather",   "casual",   "formal",    "loose",
              "tight",    "high",      "low",       "sleeveless", "colorful", "bright",
              "pale",     "curly",     "straight",  "wavy",     "medium",    "elderly",
              "middle-aged", "dark-colored", "light-colored", "multicolored", "plain",
              "patterned", "knee-length", "ankle-length", "black-and-white", "new",
              "shoulder-length", "mobile", "open", "closed", "wide", "narrow", "cropped"}) {
            t.emplace(w, PosTag::Adjective);
        }
        for (std::string_view w :
             {"is",     "are",     "was",     "were",    "be",      "been",    "being",
              "has",    "have",    "had",     "wears",   "wear",    "wore",    "worn",
              "carries", "carry",  "carried", "holds",   "hold",    "held",    "rides",
              "ride",   "rode",    "walks",   "walk",    "walked",  "stands",  "stand",
              "looks",  "look",    "seems",   "appears", "does",    "do",      "and",
              "or",     "but",     "with",    "without", "in",      "on",      "at",
              "of",     "to",      "from",    "by",      "for",     "over",    "under",
              "into",   "while",   "as",      "he",      "she",     "they",    "it",
              "him",    "them",    "who",     "which",   "also",    "very",    "not",
              "no",     "there",   "here",    "down",    "up",      "across",  "along",
              "near",   "behind",  "beside",  "around",  "toward",  "towards", "through",
              "than",   "then",    "so",      "too",     "just",    "only",    "what",
              "if",     "can",     "could",   "may",     "might",   "will",    "would"}) {
            t.emplace(w, PosTag::Other);
        }
        for (std::string_view w : {"clothing", "ring", "earring", "building", "thing", "something",
                                   "evening", "morning", "stocking", "sibling", "ceiling"}) {
            t.emplace(w, PosTag::Noun);
        }
        return t;
    }();
    return table;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

PosTag ReferenceChunker::tag(std::string_view w) noexcept {
    const auto& lex = lexicon();
    if (auto it = lex.find(w); it != lex.end()) return it->second;
    if (!w.empty() && std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c); })) {
        return PosTag::Adjective;
    }
    if (w.size() > 4 && (w.ends_with("ing") || w.ends_with("ly"))) return PosTag::Other;
    if (std::none_of(w.begin(), w.end(), [](unsigned char c) { return std::isalpha(c) || c >= 0x80; })) {
        return PosTag::Other;
    }
    return PosTag::Noun;
}

std::vector<std::string> ReferenceChunker::noun_phrases(std::string_view text) const {
    std::vector<Token> tokens;
    bool gap_clean = false;
    for (std::size_t i = 0; i < text.size();) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (is_word_char(c)) {
            Token tok;
            tok.begin = i;
            while (i < text.size() && is_word_char(static_cast<unsigned char>(text[i]))) ++i;
            // Trailing apostrophes and hyphens belong to punctuation, not the word.
            std::size_t end = i;
            while (end > tok.begin && (text[end - 1] == '\'' || text[end - 1] == '-')) --end;
            tok.end = end;
            tok.joined = gap_clean;
            if (tok.end > tok.begin) {
                tok.tag = tag(lower(text.substr(tok.begin, tok.end - tok.begin)));
                tokens.push_back(tok);
                gap_clean = end == i;
            } else {
                gap_clean = false;
            }
        } else {
            if (std::isspace(c) == 0) gap_clean = false;
            ++i;
        }
    }

    std::vector<std::string> phrases;
    std::size_t i = 0;
    while (i < tokens.size()) {
        auto continues = [&](std::size_t t) { return t == i || tokens[t].joined; };
        std::size_t j = i;
        if (tokens[j].tag == PosTag::Determiner) ++j;
        while (j < tokens.size() && tokens[j].tag == PosTag::Adjective && continues(j)) ++j;
        std::size_t k = j;
        while (k < tokens.size() && tokens[k].tag == PosTag::Noun && continues(k)) ++k;
        if (k > j) {
            phrases.emplace_back(text.substr(tokens[i].begin, tokens[k - 1].end - tokens[i].begin));
            i = k;
        } else {
            ++i;
        }
    }
    return phrases;
}

}  // namespace gtr
