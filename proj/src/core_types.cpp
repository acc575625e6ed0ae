#include "gtr/core_types.hpp"

#include <cmath>

#include "gtr/error.hpp"

namespace gtr {

namespace {

constexpr std::array<std::string_view, kNumAttributeKeys> kKeyNames = {
    "clothes_color", "clothes_style", "pants_color", "pants_style", "shoes_color",
    "shoes_style",   "gender",        "hair_color",  "hair_length", "glasses",
    "phone",         "umbrella",      "bike",        "bag",
};

}  // namespace

std::string_view key_name(AttributeKey key) noexcept { return kKeyNames[key_index(key)]; }

std::optional<AttributeKey> parse_key(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kNumAttributeKeys; ++i) {
        if (kKeyNames[i] == name) return kAllAttributeKeys[i];
    }
    return std::nullopt;
}

std::size_t key_index(AttributeKey key) noexcept { return static_cast<std::size_t>(key); }

bool is_variable(AttributeKey key) noexcept { return key_index(key) >= key_index(AttributeKey::Glasses); }

bool is_boolean(AttributeKey key) noexcept { return is_variable(key) || key == AttributeKey::HairLength; }

std::string_view boolean_token(AttributeKey key, bool yes) noexcept {
    if (key == AttributeKey::HairLength) return yes ? kLong : kShort;
    return yes ? kPresent : kAbsent;
}

bool is_affirmative(AttributeKey key, std::string_view token) noexcept {
    return token == boolean_token(key, true);
}

const AttributeAnswer* AttributeSet::find(AttributeKey key) const noexcept {
    for (const auto& a : answers) {
        if (a.key == key) return &a;
    }
    return nullptr;
}

const AttributeAnswer& AttributeSet::at(AttributeKey key) const {
    if (const auto* a = find(key)) return *a;
    throw Error(Errc::MissingKey, "attribute set for '" + image_id + "' has no answer for " +
                                      std::string(key_name(key)));
}

const AttributeSet& validate_attribute_set(const AttributeSet& set) {
    std::array<bool, kNumAttributeKeys> seen{};
    for (const auto& a : set.answers) {
        auto& flag = seen[key_index(a.key)];
        if (flag) {
            throw Error(Errc::DuplicateKey, "duplicate answer for " + std::string(key_name(a.key)) +
                                                " in '" + set.image_id + "'");
        }
        flag = true;
    }
    for (auto key : kAllAttributeKeys) {
        if (!seen[key_index(key)]) {
            throw Error(Errc::MissingKey, "missing answer for " + std::string(key_name(key)) +
                                              " in '" + set.image_id + "'");
        }
    }
    for (const auto& a : set.answers) {
        if (!std::isfinite(a.confidence) || a.confidence <= 0.0 || a.confidence > 1.0) {
            throw Error(Errc::ConfidenceOutOfRange,
                        "confidence " + std::to_string(a.confidence) + " for " +
                            std::string(key_name(a.key)) + " outside (0, 1]");
        }
        if (is_boolean(a.key) && a.value != boolean_token(a.key, true) &&
            a.value != boolean_token(a.key, false)) {
            throw Error(Errc::InvalidValue, "value '" + a.value + "' for " +
                                                std::string(key_name(a.key)) +
                                                " is not a boolean token");
        }
        if (!is_boolean(a.key) && a.value.empty()) {
            throw Error(Errc::InvalidValue, "empty value for " + std::string(key_name(a.key)));
        }
    }
    return set;
}

std::string_view split_name(Split split) noexcept {
    switch (split) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "train";
}

std::optional<Split> parse_split(std::string_view name) noexcept {
    if (name == "train") return Split::Train;
    if (name == "val") return Split::Val;
    if (name == "test") return Split::Test;
    return std::nullopt;
}

std::string_view source_name(CaptionSource source) noexcept {
    return source == CaptionSource::Template ? "template" : "lm";
}

std::optional<CaptionSource> parse_source(std::string_view name) noexcept {
    if (name == "template") return CaptionSource::Template;
    if (name == "lm") return CaptionSource::Lm;
    return std::nullopt;
}

}  // namespace gtr
