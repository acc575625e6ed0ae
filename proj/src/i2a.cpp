#include "gtr/i2a.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "gtr/error.hpp"
#include "gtr/rng.hpp"

namespace gtr {

namespace {

constexpr std::array<InstructionPrompt, kNumAttributeKeys> kPrompts = {{
    {AttributeKey::ClothesColor, "What is the color of the clothes?"},
    {AttributeKey::ClothesStyle, "What is the style of the clothes?"},
    {AttributeKey::PantsColor, "What is the color of the pants?"},
    {AttributeKey::PantsStyle, "What is the style of the pants?"},
    {AttributeKey::ShoesColor, "What is the color of the shoes?"},
    {AttributeKey::ShoesStyle, "What is the style of the shoes?"},
    {AttributeKey::Gender, "What is the gender of the person?"},
    {AttributeKey::HairColor, "What is the color of the hair?"},
    {AttributeKey::HairLength, "Is the person with long hair?"},
    {AttributeKey::Glasses, "Is the person wearing glasses?"},
    {AttributeKey::Phone, "Is the person holding a mobile phone?"},
    {AttributeKey::Umbrella, "Is the person holding an umbrella?"},
    {AttributeKey::Bike, "Is the person riding a bike?"},
    {AttributeKey::Bag, "Is the person carrying a bag?"},
}};

std::string trim_lower(std::string_view raw) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    std::size_t b = 0, e = raw.size();
    while (b < e && is_space(raw[b])) ++b;
    while (e > b && is_space(raw[e - 1])) --e;
    std::string out(raw.substr(b, e - b));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool starts_with_word(std::string_view text, std::string_view word) {
    if (!text.starts_with(word)) return false;
    return text.size() == word.size() ||
           std::isalpha(static_cast<unsigned char>(text[word.size()])) == 0;
}

std::string yes_no(bool yes) { return yes ? "yes" : "no"; }

void check_interval(const ConfidenceInterval& iv, std::string_view what) {
    if (!(iv.lo > 0.0 && iv.lo <= iv.hi && iv.hi <= 1.0)) {
        throw Error(Errc::InvalidArgument,
                    std::string(what) + " interval must satisfy 0 < lo <= hi <= 1");
    }
}

}  // namespace

const std::array<InstructionPrompt, kNumAttributeKeys>& builtin_prompt_set() noexcept { return kPrompts; }

const InstructionPrompt& prompt_for(AttributeKey key) noexcept { return kPrompts[key_index(key)]; }

std::string normalize_answer(AttributeKey key, std::string_view raw) {
    std::string norm = trim_lower(raw);
    if (norm.empty()) {
        throw Error(Errc::UnparseableAnswer, "empty answer for " + std::string(key_name(key)));
    }
    if (!is_boolean(key)) return norm;
    if (starts_with_word(norm, "yes")) return std::string(boolean_token(key, true));
    if (starts_with_word(norm, "no")) return std::string(boolean_token(key, false));
    throw Error(Errc::UnparseableAnswer, "answer '" + std::string(raw) + "' to yes/no prompt " +
                                             std::string(key_name(key)) + " is neither yes nor no");
}

AttributeSet extract_attributes(const ImageRecord& image, const VqaBackend& backend) {
    AttributeSet set;
    set.image_id = image.image_id;
    set.answers.reserve(kNumAttributeKeys);
    for (const auto& prompt : kPrompts) {
        VqaResponse response;
        try {
            response = backend.answer(image, prompt.question);
        } catch (const std::exception& e) {
            throw Error(Errc::BackendFailure, "backend '" + std::string(backend.name()) +
                                                  "' failed on " + std::string(key_name(prompt.key)) +
                                                  " for image '" + image.image_id + "': " + e.what());
        }
        if (!std::isfinite(response.confidence)) {
            throw Error(Errc::BackendFailure, "non-finite confidence for " +
                                                  std::string(key_name(prompt.key)) + " on image '" +
                                                  image.image_id + "'");
        }
        AttributeAnswer answer;
        answer.key = prompt.key;
        try {
            answer.value = normalize_answer(prompt.key, response.raw_answer);
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + " (image '" + image.image_id + "')");
        }
        answer.raw_answer = std::move(response.raw_answer);
        answer.confidence = std::clamp(response.confidence, kConfidenceFloor, 1.0);
        set.answers.push_back(std::move(answer));
    }
    return set;
}

MockOracle::MockOracle(MockOracleConfig config) : config_(std::move(config)) {
    if (!(config_.flip_probability >= 0.0 && config_.flip_probability <= 1.0)) {
        throw Error(Errc::InvalidArgument, "flip_probability must lie in [0, 1]");
    }
    check_interval(config_.confidence_law_correct, "confidence_law_correct");
    check_interval(config_.confidence_law_flipped, "confidence_law_flipped");
    std::array<std::set<std::string>, kNumAttributeKeys> distinct;
    for (const auto& [id, values] : config_.truth_table) {
        for (std::size_t k = 0; k < kNumAttributeKeys; ++k) distinct[k].insert(values[k]);
    }
    for (std::size_t k = 0; k < kNumAttributeKeys; ++k) {
        vocab_[k].assign(distinct[k].begin(), distinct[k].end());
    }
}

const AttributeValues& MockOracle::truth(std::string_view image_id) const {
    auto it = config_.truth_table.find(std::string(image_id));
    if (it == config_.truth_table.end()) {
        throw Error(Errc::UnknownImage, "mock oracle has no truth for image '" + std::string(image_id) + "'");
    }
    return it->second;
}

VqaResponse MockOracle::respond(std::string_view image_id, AttributeKey key) const {
    const std::string& true_value = truth(image_id)[key_index(key)];
    std::string stream = "mock/";
    stream += image_id;
    stream += '/';
    stream += key_name(key);
    Rng rng(derive_seed(config_.seed, stream));

    const bool flipped = rng.bernoulli(config_.flip_probability);
    std::string value = true_value;
    if (flipped) {
        if (is_boolean(key)) {
            value = std::string(boolean_token(key, !is_affirmative(key, true_value)));
        } else {
            std::vector<std::string_view> wrong;
            for (const auto& v : vocab_[key_index(key)]) {
                if (v != true_value) wrong.push_back(v);
            }
            // A key with a single observed value has nothing to corrupt to.
            if (!wrong.empty()) value = std::string(wrong[rng.uniform_index(wrong.size())]);
        }
    }
    const auto& law = flipped ? config_.confidence_law_flipped : config_.confidence_law_correct;
    VqaResponse r;
    r.confidence = rng.uniform(law.lo, law.hi);
    r.raw_answer = is_boolean(key) ? yes_no(is_affirmative(key, value)) : value;
    return r;
}

VqaResponse MockOracle::answer(const ImageRecord& image, std::string_view question) const {
    for (const auto& p : kPrompts) {
        if (p.question == question) return respond(image.image_id, p.key);
    }
    throw Error(Errc::BackendFailure, "mock oracle does not know the question '" + std::string(question) + "'");
}

std::string MockOracle::caption(const ImageRecord& image) const {
    // Coarse, attribute-poor description in the style of a generic captioner.
    return "a photo of a " + truth(image.image_id)[key_index(AttributeKey::Gender)];
}

VqaResponse mock_oracle_answer(const MockOracle& oracle, std::string_view image_id,
                               const InstructionPrompt& prompt) {
    return oracle.respond(image_id, prompt.key);
}

AttributeSet truth_attribute_set(std::string_view image_id, const AttributeValues& values) {
    AttributeSet set;
    set.image_id = std::string(image_id);
    for (auto key : kAllAttributeKeys) {
        const auto& v = values[key_index(key)];
        AttributeAnswer a;
        a.key = key;
        a.value = v;
        a.raw_answer = is_boolean(key) ? yes_no(is_affirmative(key, v)) : v;
        a.confidence = 1.0;
        set.answers.push_back(std::move(a));
    }
    return set;
}

}  // namespace gtr
