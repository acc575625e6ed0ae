#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gtr/core_types.hpp"

namespace gtr {

struct InstructionPrompt {
    AttributeKey key{};
    std::string_view question;
};

// The 14 attribute questions in canonical order, one per AttributeKey.
const std::array<InstructionPrompt, kNumAttributeKeys>& builtin_prompt_set() noexcept;

const InstructionPrompt& prompt_for(AttributeKey key) noexcept;

// Maps a raw VQA answer to the stored token. Boolean keys accept answers whose
// first word is "yes" or "no"; other keys are trimmed and lowercased.
// Throws UnparseableAnswer otherwise.
std::string normalize_answer(AttributeKey key, std::string_view raw);

struct VqaResponse {
    std::string raw_answer;
    double confidence = 0.0;

    friend bool operator==(const VqaResponse&, const VqaResponse&) = default;
};

// A vision-language model that answers questions about an image and produces
// a free-form caption. Implementations must be deterministic and safe to call
// concurrently from several threads.
class VqaBackend {
public:
    virtual ~VqaBackend() = default;

    virtual std::string_view name() const noexcept = 0;
    virtual VqaResponse answer(const ImageRecord& image, std::string_view question) const = 0;
    virtual std::string caption(const ImageRecord& image) const = 0;
};

// Runs every prompt through the backend. Confidences are clamped to
// [1e-6, 1]; any backend error aborts the image with BackendFailure naming
// the prompt key.
AttributeSet extract_attributes(const ImageRecord& image, const VqaBackend& backend);

// ---------------------------------------------------------------------------
// Mock oracle: a seeded stand-in for the VQA model driven by a ground-truth
// attribute table.

using AttributeValues = std::array<std::string, kNumAttributeKeys>;
using TruthTable = std::map<std::string, AttributeValues>;

struct ConfidenceInterval {
    double lo = 1.0;
    double hi = 1.0;
};

struct MockOracleConfig {
    TruthTable truth_table;
    double flip_probability = 0.0;
    ConfidenceInterval confidence_law_correct{1.0, 1.0};
    ConfidenceInterval confidence_law_flipped{1.0, 1.0};
    std::uint64_t seed = 0;
};

class MockOracle final : public VqaBackend {
public:
    // Throws InvalidArgument on malformed probabilities or intervals.
    explicit MockOracle(MockOracleConfig config);

    std::string_view name() const noexcept override { return "mock"; }
    VqaResponse answer(const ImageRecord& image, std::string_view question) const override;
    std::string caption(const ImageRecord& image) const override;

    // Answer for one (image, key) cell. The draw uses a private stream seeded
    // from (seed, image_id, key), so call order never matters.
    VqaResponse respond(std::string_view image_id, AttributeKey key) const;

    const MockOracleConfig& config() const noexcept { return config_; }
    // Sorted distinct values of one key across the truth table.
    const std::vector<std::string>& vocabulary(AttributeKey key) const noexcept {
        return vocab_[key_index(key)];
    }

private:
    const AttributeValues& truth(std::string_view image_id) const;

    MockOracleConfig config_;
    std::array<std::vector<std::string>, kNumAttributeKeys> vocab_;
};

VqaResponse mock_oracle_answer(const MockOracle& oracle, std::string_view image_id,
                               const InstructionPrompt& prompt);

// Builds a ground-truth AttributeSet (confidence 1, raw answer as a VQA model
// would phrase it) from a truth-table row.
AttributeSet truth_attribute_set(std::string_view image_id, const AttributeValues& values);

}  // namespace gtr
