#include "gtr/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gtr/error.hpp"

namespace gtr {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw Error(Errc::ConfigError, "config key '" + std::string(key) + "': '" + std::string(value) +
                                       "' is not " + std::string(expected));
}

double parse_double(std::string_view key, std::string_view value) {
    std::string s(value);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        bad_value(key, value, "a number");
    }
    if (used != s.size() || !std::isfinite(v)) bad_value(key, value, "a finite number");
    return v;
}

std::uint64_t parse_uint(std::string_view key, std::string_view value) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value, "a non-negative integer");
    return v;
}

ConfidenceInterval parse_interval(std::string_view key, std::string_view value) {
    const auto comma = value.find(',');
    if (comma == std::string_view::npos) bad_value(key, value, "an interval 'lo,hi'");
    return {parse_double(key, trim(value.substr(0, comma))), parse_double(key, trim(value.substr(comma + 1)))};
}

std::filesystem::path parse_path(std::string_view value, const std::filesystem::path& base_dir) {
    std::filesystem::path p{std::string(value)};
    if (p.empty() || p.is_absolute() || base_dir.empty()) return p;
    return base_dir / p;
}

}  // namespace

LossSet parse_loss_set(std::string_view text) {
    LossSet set;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const auto name = trim(text.substr(start, end - start));
        if (name == "itc") set.itc = true;
        else if (name == "itm") set.itm = true;
        else if (name == "sdm") set.sdm = true;
        else if (name == "irr") set.irr = true;
        else if (name == "id") set.id = true;
        else if (!name.empty()) bad_value("loss_set", name, "one of itc, itm, sdm, irr, id");
        start = end + 1;
    }
    return set;
}

std::string format_loss_set(const LossSet& set) {
    std::string out;
    auto add = [&](bool on, std::string_view name) {
        if (!on) return;
        if (!out.empty()) out += ',';
        out += name;
    };
    add(set.itc, "itc");
    add(set.itm, "itm");
    add(set.sdm, "sdm");
    add(set.irr, "irr");
    add(set.id, "id");
    return out;
}

void set_config_value(PipelineConfig& c, std::string_view key, std::string_view value,
                      const std::filesystem::path& base_dir) {
    if (key == "manifest") c.manifest = parse_path(value, base_dir);
    else if (key == "captions") c.captions = parse_path(value, base_dir);
    else if (key == "model") c.model = parse_path(value, base_dir);
    else if (key == "report") c.report = parse_path(value, base_dir);
    else if (key == "train_log") c.train_log = parse_path(value, base_dir);
    else if (key == "text_corpus") c.text_corpus = parse_path(value, base_dir);
    else if (key == "style_pairs") c.style_pairs = parse_path(value, base_dir);
    else if (key == "vqa_backend") c.vqa_backend = std::string(value);
    else if (key == "a2t_mode") {
        auto mode = parse_source(value);
        if (!mode) bad_value(key, value, "template or lm");
        c.a2t_mode = *mode;
    }
    else if (key == "a2t_backend") c.a2t_backend = std::string(value);
    else if (key == "mock_flip_probability") c.mock_flip_probability = parse_double(key, value);
    else if (key == "mock_confidence_correct") c.mock_confidence_correct = parse_interval(key, value);
    else if (key == "mock_confidence_flipped") c.mock_confidence_flipped = parse_interval(key, value);
    else if (key == "workers") c.workers = parse_uint(key, value);
    else if (key == "beta") c.beta = parse_double(key, value);
    else if (key == "temperature_init") c.temperature_init = parse_double(key, value);
    else if (key == "batch_size") c.batch_size = parse_uint(key, value);
    else if (key == "epochs") c.epochs = parse_uint(key, value);
    else if (key == "max_steps") c.max_steps = parse_uint(key, value);
    else if (key == "learning_rate") c.learning_rate = parse_double(key, value);
    else if (key == "embedding_dim") c.embedding_dim = parse_uint(key, value);
    else if (key == "hash_dim") c.hash_dim = parse_uint(key, value);
    else if (key == "loss_set") c.loss_set = parse_loss_set(value);
    else if (key == "itm_strategy") {
        if (value == "uniform") c.itm_strategy = NegativeStrategy::Uniform;
        else if (value == "hard") c.itm_strategy = NegativeStrategy::Hard;
        else bad_value(key, value, "uniform or hard");
    }
    else if (key == "sdm_epsilon") c.sdm_epsilon = parse_double(key, value);
    else if (key == "irr_mask_ratio") c.irr_mask_ratio = parse_double(key, value);
    else if (key == "irr_vocab_size") c.irr_vocab_size = parse_uint(key, value);
    else if (key == "image_feature_noise") c.image_feature_noise = parse_double(key, value);
    else if (key == "eval_split") {
        auto split = parse_split(value);
        if (!split) bad_value(key, value, "train, val or test");
        c.eval_split = *split;
    }
    else if (key == "query_source") {
        if (value == "auto") c.query_source = QuerySource::Auto;
        else if (value == "reference") c.query_source = QuerySource::Reference;
        else if (value == "template") c.query_source = QuerySource::Template;
        else bad_value(key, value, "auto, reference or template");
    }
    else if (key == "seed") c.seed = parse_uint(key, value);
    else throw Error(Errc::ConfigError, "unknown config key '" + std::string(key) + "'");
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigError, "cannot read config " + path.string());
    PipelineConfig config;
    const auto base_dir = path.parent_path();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw Error(Errc::ConfigError, path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        set_config_value(config, trim(view.substr(0, eq)), trim(view.substr(eq + 1)), base_dir);
    }
    return config;
}

void validate_config(const PipelineConfig& c, bool for_training) {
    auto fail = [](const std::string& msg) { throw Error(Errc::ConfigError, msg); };
    if (c.beta < 0.0) fail("beta must be >= 0");
    if (!(c.temperature_init > 0.0)) fail("temperature_init must be positive");
    if (!(c.mock_flip_probability >= 0.0 && c.mock_flip_probability <= 1.0)) {
        fail("mock_flip_probability must lie in [0, 1]");
    }
    if (c.workers == 0) fail("workers must be at least 1");
    if (!for_training) return;
    if (c.loss_set.empty()) fail("loss_set must name at least one loss");
    if (c.batch_size < 2) fail("batch_size must be at least 2");
    if (c.embedding_dim == 0 || c.hash_dim == 0) fail("embedding_dim and hash_dim must be positive");
    if (!(c.learning_rate > 0.0)) fail("learning_rate must be positive");
    if (!(c.irr_mask_ratio > 0.0 && c.irr_mask_ratio <= 1.0)) fail("irr_mask_ratio must lie in (0, 1]");
    if (c.irr_vocab_size < 2) fail("irr_vocab_size must be at least 2");
}

}  // namespace gtr
