#include "gtr/caption_records.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "gtr/error.hpp"

namespace gtr {

std::string caption_to_json_line(const PseudoCaption& caption) {
    nlohmann::ordered_json j;
    j["image_id"] = caption.image_id;
    j["text"] = caption.text;
    j["confidence"] = caption.confidence.value();
    j["log_confidence"] = caption.confidence.log_value();
    j["source"] = source_name(caption.source);
    j["ic_caption"] = caption.ic_caption;
    auto attrs = nlohmann::ordered_json::array();
    for (const auto& a : caption.attribute_set.answers) {
        nlohmann::ordered_json entry;
        entry["key"] = key_name(a.key);
        entry["value"] = a.value;
        entry["confidence"] = a.confidence;
        entry["raw_answer"] = a.raw_answer;
        attrs.push_back(std::move(entry));
    }
    j["attributes"] = std::move(attrs);
    return j.dump();
}

PseudoCaption caption_from_json_line(const std::string& line) {
    PseudoCaption c;
    double stored = 0.0;
    try {
        const auto j = nlohmann::json::parse(line);
        c.image_id = j.at("image_id").get<std::string>();
        c.text = j.at("text").get<std::string>();
        stored = j.at("confidence").get<double>();
        c.confidence = ConfidenceScore::from_log(j.at("log_confidence").get<double>());
        const auto source = parse_source(j.at("source").get<std::string>());
        if (!source) throw Error(Errc::InvalidValue, "unknown caption source");
        c.source = *source;
        c.ic_caption = j.at("ic_caption").get<std::string>();
        c.attribute_set.image_id = c.image_id;
        for (const auto& a : j.at("attributes")) {
            const auto name = a.at("key").get<std::string>();
            const auto key = parse_key(name);
            if (!key) throw Error(Errc::InvalidValue, "unknown attribute key '" + name + "'");
            AttributeAnswer answer;
            answer.key = *key;
            answer.value = a.at("value").get<std::string>();
            answer.confidence = a.at("confidence").get<double>();
            answer.raw_answer = a.value("raw_answer", answer.value);
            c.attribute_set.answers.push_back(std::move(answer));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, std::string("caption record: ") + e.what());
    }
    validate_attribute_set(c.attribute_set);
    double log_sum = 0.0;
    for (const auto& a : c.attribute_set.answers) log_sum += std::log(a.confidence);
    const double product = std::exp(log_sum);
    if (std::abs(product - stored) > 1e-12 * std::max(1.0, std::abs(stored)) ||
        std::abs(c.confidence.value() - stored) > 1e-12 * std::max(1.0, std::abs(stored))) {
        throw Error(Errc::ParseError, "caption '" + c.image_id +
                                          "': stored confidence disagrees with its attribute confidences");
    }
    return c;
}

void write_captions(const std::filesystem::path& path, const std::vector<PseudoCaption>& captions) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    for (const auto& c : captions) out << caption_to_json_line(c) << '\n';
}

std::vector<PseudoCaption> read_captions(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read captions " + path.string());
    std::vector<PseudoCaption> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(caption_from_json_line(line));
        } catch (const Error& e) {
            throw Error(e.code(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace gtr
