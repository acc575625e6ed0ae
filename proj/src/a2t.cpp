#include "gtr/a2t.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gtr/error.hpp"

namespace gtr {

namespace {

std::string join_items(const std::vector<std::string_view>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += (i + 1 == items.size()) ? " and " : ", ";
        out += items[i];
    }
    return out;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

std::string_view pronoun_for(std::string_view gender) {
    std::string word;
    auto masculine = [&] { return word == "man" || word == "male" || word == "boy"; };
    for (char ch : gender) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalpha(c)) {
            word.push_back(static_cast<char>(std::tolower(c)));
        } else {
            if (masculine()) return "He";
            word.clear();
        }
    }
    return masculine() ? "He" : "She";
}

std::string render_template(const AttributeSet& set) {
    using K = AttributeKey;
    const std::string& gender = set.value(K::Gender);
    std::string out = "The " + gender + " with " + set.value(K::HairColor) + " " +
                      set.value(K::HairLength) + " hair wears " + set.value(K::ClothesColor) + " " +
                      set.value(K::ClothesStyle) + ", " + set.value(K::PantsColor) + " " +
                      set.value(K::PantsStyle) + " and " + set.value(K::ShoesColor) + " " +
                      set.value(K::ShoesStyle) + ".";

    static constexpr std::pair<AttributeKey, std::string_view> kCarried[] = {
        {K::Bag, "a bag"}, {K::Glasses, "glasses"}, {K::Phone, "a phone"}, {K::Umbrella, "an umbrella"}};
    std::vector<std::string_view> items;
    for (const auto& [key, phrase] : kCarried) {
        if (is_affirmative(key, set.value(key))) items.push_back(phrase);
    }
    if (!items.empty()) {
        out += " ";
        out += pronoun_for(gender);
        out += " is carrying " + join_items(items) + ".";
    }
    if (is_affirmative(K::Bike, set.value(K::Bike))) {
        out += " The " + gender + " is riding a bike.";
    }
    return out;
}

std::string StylePair::joined_attributes() const {
    std::string out;
    for (const auto& w : attributes) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

std::vector<std::string> extract_style_attributes(const TextRecord& text, const NounPhraseParser& parser) {
    if (text.text.empty()) {
        throw Error(Errc::InvalidArgument, "text '" + text.text_id + "' is empty");
    }
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (auto& phrase : parser.noun_phrases(text.text)) {
        if (seen.insert(phrase).second) out.push_back(std::move(phrase));
    }
    if (out.empty()) {
        throw Error(Errc::EmptyExtraction, "no noun phrase found in text '" + text.text_id + "'");
    }
    return out;
}

StylePairBuild build_style_pairs(const std::vector<TextRecord>& corpus, const NounPhraseParser& parser) {
    if (corpus.empty()) throw Error(Errc::InvalidArgument, "style corpus is empty");
    StylePairBuild build;
    for (const auto& record : corpus) {
        if (record.text.empty() || is_blank(record.text)) {
            ++build.skipped;
            continue;
        }
        try {
            build.pairs.push_back({extract_style_attributes(record, parser), record.text});
        } catch (const Error& e) {
            if (e.code() != Errc::EmptyExtraction) throw;
            ++build.skipped;
        }
    }
    return build;
}

void write_style_pairs(const std::string& path, const std::vector<StylePair>& pairs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path);
    for (const auto& p : pairs) {
        nlohmann::ordered_json j;
        j["attributes"] = p.joined_attributes();
        j["text"] = p.text;
        out << j.dump() << '\n';
    }
}

std::vector<StylePair> read_style_pairs(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path);
    std::vector<StylePair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            StylePair p;
            std::istringstream words(j.at("attributes").get<std::string>());
            // Attribute phrases are space-joined, so a round trip recovers words
            // rather than phrases.
            for (std::string w; words >> w;) p.attributes.push_back(w);
            p.text = j.at("text").get<std::string>();
            pairs.push_back(std::move(p));
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ParseError, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return pairs;
}

AttributeSequence attribute_sequence(const AttributeSet& set) {
    using K = AttributeKey;
    AttributeSequence seq;
    seq.source = set;
    seq.words.push_back(set.value(K::Gender));
    seq.words.push_back(set.value(K::HairColor) + " " + set.value(K::HairLength) + " hair");
    seq.words.push_back(set.value(K::ClothesColor) + " " + set.value(K::ClothesStyle));
    seq.words.push_back(set.value(K::PantsColor) + " " + set.value(K::PantsStyle));
    seq.words.push_back(set.value(K::ShoesColor) + " " + set.value(K::ShoesStyle));
    for (auto key : {K::Bag, K::Glasses, K::Phone, K::Umbrella, K::Bike}) {
        if (is_affirmative(key, set.value(key))) seq.words.emplace_back(key_name(key));
    }
    return seq;
}

FinetuneSummary EchoTemplateBackend::finetune(const std::vector<StylePair>& pairs) {
    FinetuneSummary summary;
    summary.backend = std::string(name());
    summary.pairs = pairs.size();
    for (const auto& p : pairs) {
        std::istringstream words(p.text);
        for (std::string w; words >> w;) ++summary.target_tokens;
    }
    return summary;
}

std::string EchoTemplateBackend::convert(const AttributeSequence& attributes) const {
    return render_template(attributes.source);
}

std::unique_ptr<A2TBackend> make_a2t_backend(std::string_view name) {
    if (name == "echo-template") return std::make_unique<EchoTemplateBackend>();
    throw Error(Errc::UnknownBackend, "unknown A2T backend '" + std::string(name) + "'");
}

PseudoCaption compose_pseudo_caption(std::string a2t_text, std::string ic_caption, AttributeSet set,
                                     ConfidenceScore confidence, CaptionSource source) {
    if (a2t_text.empty()) throw Error(Errc::InvalidArgument, "A2T text is empty");
    PseudoCaption caption;
    caption.image_id = set.image_id;
    caption.text = std::move(a2t_text);
    if (!ic_caption.empty()) {
        caption.text += ' ';
        caption.text += ic_caption;
    }
    caption.confidence = confidence;
    caption.source = source;
    caption.ic_caption = std::move(ic_caption);
    caption.attribute_set = std::move(set);
    return caption;
}

}  // namespace gtr
