#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "gtr/core_types.hpp"
#include "gtr/cs_losses.hpp"
#include "gtr/i2a.hpp"

namespace gtr {

struct LossSet {
    bool itc = false;
    bool itm = false;
    bool sdm = false;
    bool irr = false;
    bool id = false;

    bool empty() const noexcept { return !(itc || itm || sdm || irr || id); }
    friend bool operator==(const LossSet&, const LossSet&) = default;
};

// Parses a comma-separated subset of {itc, itm, sdm, irr, id}.
LossSet parse_loss_set(std::string_view text);
std::string format_loss_set(const LossSet& set);

enum class QuerySource { Auto, Reference, Template };

struct PipelineConfig {
    // files
    std::filesystem::path manifest;
    std::filesystem::path captions = "captions.jsonl";
    std::filesystem::path model = "model.json";
    std::filesystem::path report = "report.json";
    std::filesystem::path train_log = "train_log.csv";
    std::filesystem::path text_corpus;  // style texts for the lm A2T mode
    std::filesystem::path style_pairs;  // where to write the derived style pairs

    // generation stage
    std::string vqa_backend = "mock";
    CaptionSource a2t_mode = CaptionSource::Template;
    std::string a2t_backend = "echo-template";
    double mock_flip_probability = 0.0;
    ConfidenceInterval mock_confidence_correct{1.0, 1.0};
    ConfidenceInterval mock_confidence_flipped{1.0, 1.0};
    std::size_t workers = 1;

    // retrieval stage
    double beta = 0.8;
    double temperature_init = kDefaultTemperature;
    std::size_t batch_size = 52;
    std::size_t epochs = 30;
    std::size_t max_steps = 0;  // 0: no cap beyond epochs
    double learning_rate = 1e-2;
    std::size_t embedding_dim = 64;
    std::size_t hash_dim = 2048;
    LossSet loss_set{true, true, false, false, false};
    NegativeStrategy itm_strategy = NegativeStrategy::Uniform;
    double sdm_epsilon = kDefaultSdmEpsilon;
    double irr_mask_ratio = 0.15;
    std::size_t irr_vocab_size = 64;
    double image_feature_noise = 0.0;

    // evaluation
    Split eval_split = Split::Test;
    QuerySource query_source = QuerySource::Auto;

    std::uint64_t seed = 0;
};

// Reads a flat "key = value" file; '#' starts a comment. Relative paths are
// resolved against the config file's directory. Throws ConfigError on unknown
// keys or malformed values.
PipelineConfig load_config(const std::filesystem::path& path);

// Applies one key/value pair; also used for command-line overrides.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value,
                      const std::filesystem::path& base_dir = {});

// Throws ConfigError when a knob is outside its domain.
void validate_config(const PipelineConfig& config, bool for_training);

}  // namespace gtr
