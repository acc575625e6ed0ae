#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtr/core_types.hpp"
#include "gtr/noun_phrase.hpp"

namespace gtr {

// "He" when the gender token contains the word man, male or boy
// (case-insensitive, whole words), otherwise "She".
std::string_view pronoun_for(std::string_view gender);

// Fills the three-sentence person template. The first sentence always carries
// the fixed attributes; the accessory sentence lists only present items and
// disappears when none is present; the bike sentence appears only when the
// person rides one.
std::string render_template(const AttributeSet& set);

// ---------------------------------------------------------------------------
// Style pairs for LM finetuning.

struct StylePair {
    std::vector<std::string> attributes;
    std::string text;

    // Space-joined attribute sequence, the LM input.
    std::string joined_attributes() const;

    friend bool operator==(const StylePair&, const StylePair&) = default;
};

// Noun phrases of the text in order of first appearance, duplicates removed.
// Throws InvalidArgument on empty text and EmptyExtraction when the parser
// finds nothing.
std::vector<std::string> extract_style_attributes(const TextRecord& text, const NounPhraseParser& parser);

struct StylePairBuild {
    std::vector<StylePair> pairs;
    std::size_t skipped = 0;
};

StylePairBuild build_style_pairs(const std::vector<TextRecord>& corpus, const NounPhraseParser& parser);

void write_style_pairs(const std::string& path, const std::vector<StylePair>& pairs);
std::vector<StylePair> read_style_pairs(const std::string& path);

// ---------------------------------------------------------------------------
// Attributes-to-text language model.

// Input handed to an A2T backend: the attribute word sequence built from an
// image's attributes, plus the structured set it came from. Neural adapters
// consume `words`; the reference backend renders `source`.
struct AttributeSequence {
    std::vector<std::string> words;
    AttributeSet source;
};

// Phrases describing the image: gender, hair, each garment, then every
// present accessory, in template order.
AttributeSequence attribute_sequence(const AttributeSet& set);

struct FinetuneSummary {
    std::string backend;
    std::size_t pairs = 0;
    std::size_t target_tokens = 0;
};

class A2TBackend {
public:
    virtual ~A2TBackend() = default;

    virtual std::string_view name() const noexcept = 0;
    // Adapts the model to the style corpus: next-token likelihood of each
    // pair's text conditioned on its attribute sequence.
    virtual FinetuneSummary finetune(const std::vector<StylePair>& pairs) = 0;
    virtual std::string convert(const AttributeSequence& attributes) const = 0;
};

// Reference backend with no learned state: finetune only records corpus
// statistics and convert renders the template from the source set.
class EchoTemplateBackend final : public A2TBackend {
public:
    std::string_view name() const noexcept override { return "echo-template"; }
    FinetuneSummary finetune(const std::vector<StylePair>& pairs) override;
    std::string convert(const AttributeSequence& attributes) const override;
};

// Throws UnknownBackend for names other than "echo-template".
std::unique_ptr<A2TBackend> make_a2t_backend(std::string_view name);

// ---------------------------------------------------------------------------

// Final caption: a2t_text, then a single space and ic_caption when the latter
// is non-empty.
PseudoCaption compose_pseudo_caption(std::string a2t_text, std::string ic_caption, AttributeSet set,
                                     ConfidenceScore confidence, CaptionSource source);

}  // namespace gtr
