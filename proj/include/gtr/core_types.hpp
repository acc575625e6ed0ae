#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtr/confidence.hpp"

namespace gtr {

// One key per instruction prompt, in prompt order.
enum class AttributeKey {
    ClothesColor,
    ClothesStyle,
    PantsColor,
    PantsStyle,
    ShoesColor,
    ShoesStyle,
    Gender,
    HairColor,
    HairLength,
    Glasses,
    Phone,
    Umbrella,
    Bike,
    Bag,
};

inline constexpr std::size_t kNumAttributeKeys = 14;

inline constexpr std::array<AttributeKey, kNumAttributeKeys> kAllAttributeKeys = {
    AttributeKey::ClothesColor, AttributeKey::ClothesStyle, AttributeKey::PantsColor,
    AttributeKey::PantsStyle,   AttributeKey::ShoesColor,   AttributeKey::ShoesStyle,
    AttributeKey::Gender,       AttributeKey::HairColor,    AttributeKey::HairLength,
    AttributeKey::Glasses,      AttributeKey::Phone,        AttributeKey::Umbrella,
    AttributeKey::Bike,         AttributeKey::Bag,
};

// Canonical tokens for the boolean-valued keys.
inline constexpr std::string_view kPresent = "present";
inline constexpr std::string_view kAbsent = "absent";
inline constexpr std::string_view kLong = "long";
inline constexpr std::string_view kShort = "short";

std::string_view key_name(AttributeKey key) noexcept;
std::optional<AttributeKey> parse_key(std::string_view name) noexcept;
std::size_t key_index(AttributeKey key) noexcept;

// Accessories whose presence varies per person (glasses .. bag).
bool is_variable(AttributeKey key) noexcept;
// Keys answered with yes/no: every VARIABLE key plus hair_length.
bool is_boolean(AttributeKey key) noexcept;

// Canonical token for a boolean answer ("present"/"absent", or "long"/"short"
// for hair_length).
std::string_view boolean_token(AttributeKey key, bool yes) noexcept;
bool is_affirmative(AttributeKey key, std::string_view token) noexcept;

struct AttributeAnswer {
    AttributeKey key{};
    std::string raw_answer;
    std::string value;
    double confidence = 1.0;

    friend bool operator==(const AttributeAnswer&, const AttributeAnswer&) = default;
};

struct AttributeSet {
    std::string image_id;
    std::vector<AttributeAnswer> answers;

    const AttributeAnswer* find(AttributeKey key) const noexcept;
    // Throws MissingKey when absent.
    const AttributeAnswer& at(AttributeKey key) const;
    const std::string& value(AttributeKey key) const { return at(key).value; }

    friend bool operator==(const AttributeSet&, const AttributeSet&) = default;
};

// Checks that every key appears exactly once, confidences lie in (0, 1] and
// boolean keys carry a canonical token. Returns the input unchanged.
const AttributeSet& validate_attribute_set(const AttributeSet& set);

enum class Split { Train, Val, Test };

std::string_view split_name(Split split) noexcept;
std::optional<Split> parse_split(std::string_view name) noexcept;

struct ImageRecord {
    std::string image_id;
    std::string path;
    std::string identity_id;
    Split split = Split::Train;

    friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct TextRecord {
    std::string text_id;
    std::string text;
};

enum class CaptionSource { Template, Lm };

std::string_view source_name(CaptionSource source) noexcept;
std::optional<CaptionSource> parse_source(std::string_view name) noexcept;

struct PseudoCaption {
    std::string image_id;
    std::string text;
    ConfidenceScore confidence;
    CaptionSource source = CaptionSource::Template;
    std::string ic_caption;
    AttributeSet attribute_set;

    friend bool operator==(const PseudoCaption&, const PseudoCaption&) = default;
};

}  // namespace gtr
