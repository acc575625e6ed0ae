#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gtr {

// Splits text into noun phrases. Every returned phrase must be a contiguous
// substring of the input, in order of appearance.
class NounPhraseParser {
public:
    virtual ~NounPhraseParser() = default;
    virtual std::vector<std::string> noun_phrases(std::string_view text) const = 0;
};

enum class PosTag { Determiner, Adjective, Noun, Other };

// Shallow chunker: tags tokens from a built-in lexicon of person-description
// vocabulary and groups maximal runs matching DET? ADJ* NOUN+ into phrases.
// Unknown words are nouns, except "-ing"/"-ly" forms which are treated as
// verbs and adverbs.
class ReferenceChunker final : public NounPhraseParser {
public:
    std::vector<std::string> noun_phrases(std::string_view text) const override;

    static PosTag tag(std::string_view lowercase_word) noexcept;
};

}  // namespace gtr
