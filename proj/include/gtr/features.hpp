#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gtr/cs_losses.hpp"
#include "gtr/i2a.hpp"

namespace gtr {

// Lowercased alphanumeric runs; everything else separates words.
std::vector<std::string> tokenize_words(std::string_view text);

// Hashed bag of unigrams and adjacent bigrams. Feature "u:<w>" or
// "b:<w1> <w2>" lands in bucket fnv1a64(feature) % dim; the count vector is
// L2-normalized.
Vector hashed_text_features(const std::vector<std::string>& tokens, std::size_t dim);

// One-hot layout over every (key, value) pair seen in a truth table.
class AttributeVocabulary {
public:
    AttributeVocabulary() = default;
    explicit AttributeVocabulary(const TruthTable& table);

    std::size_t dim() const noexcept { return offsets_.empty() ? 0 : total_; }
    // Concatenated one-hot blocks scaled to unit norm. Values outside the
    // vocabulary contribute nothing.
    Vector encode(const AttributeValues& values) const;

    const std::vector<std::vector<std::string>>& values() const noexcept { return values_; }
    static AttributeVocabulary from_values(std::vector<std::vector<std::string>> values);

private:
    std::vector<std::vector<std::string>> values_;  // per key, sorted
    std::vector<std::size_t> offsets_;
    std::size_t total_ = 0;
};

}  // namespace gtr
