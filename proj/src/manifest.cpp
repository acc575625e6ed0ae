#include "gtr/manifest.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

#include "gtr/error.hpp"

namespace gtr {

namespace {

using json = nlohmann::json;

std::string attribute_token(AttributeKey key, const json& v) {
    if (is_boolean(key)) {
        if (v.is_boolean()) return std::string(boolean_token(key, v.get<bool>()));
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == boolean_token(key, true) || s == boolean_token(key, false)) return s;
            return normalize_answer(key, s);
        }
        throw Error(Errc::InvalidValue, std::string(key_name(key)) + " must be a boolean or yes/no string");
    }
    if (!v.is_string()) throw Error(Errc::InvalidValue, std::string(key_name(key)) + " must be a string");
    return normalize_answer(key, v.get<std::string>());
}

ManifestEntry parse_entry(const json& j) {
    ManifestEntry e;
    e.image.image_id = j.at("image_id").get<std::string>();
    e.image.path = j.at("path").get<std::string>();
    e.image.identity_id = j.at("identity_id").get<std::string>();
    const auto split_text = j.at("split").get<std::string>();
    const auto split = parse_split(split_text);
    if (!split) throw Error(Errc::InvalidValue, "split '" + split_text + "' is not train, val or test");
    e.image.split = *split;
    if (e.image.image_id.empty()) throw Error(Errc::InvalidValue, "image_id is empty");

    if (auto it = j.find("attributes"); it != j.end() && !it->is_null()) {
        AttributeValues values;
        for (auto key : kAllAttributeKeys) {
            const auto field = it->find(std::string(key_name(key)));
            if (field == it->end()) {
                throw Error(Errc::MissingKey, "attributes lack " + std::string(key_name(key)));
            }
            values[key_index(key)] = attribute_token(key, *field);
        }
        for (const auto& [name, _] : it->items()) {
            if (!parse_key(name)) throw Error(Errc::InvalidValue, "unknown attribute key '" + name + "'");
        }
        e.attributes = std::move(values);
    }
    if (auto it = j.find("caption"); it != j.end() && !it->is_null()) {
        e.caption = it->get<std::string>();
    }
    return e;
}

}  // namespace

bool Manifest::has_attributes() const noexcept {
    return !entries.empty() && entries.front().attributes.has_value();
}

bool Manifest::has_captions() const noexcept {
    for (const auto& e : entries) {
        if (!e.caption) return false;
    }
    return !entries.empty();
}

std::vector<const ManifestEntry*> Manifest::split(Split split) const {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : entries) {
        if (e.image.split == split) out.push_back(&e);
    }
    return out;
}

const ManifestEntry* Manifest::find(std::string_view image_id) const {
    for (const auto& e : entries) {
        if (e.image.image_id == image_id) return &e;
    }
    return nullptr;
}

TruthTable Manifest::truth_table() const {
    TruthTable table;
    for (const auto& e : entries) {
        if (e.attributes) table.emplace(e.image.image_id, *e.attributes);
    }
    return table;
}

Manifest parse_manifest(std::istream& in, const std::string& origin) {
    Manifest manifest;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    std::size_t with_attributes = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ManifestEntry entry;
        try {
            entry = parse_entry(json::parse(line));
        } catch (const json::exception& e) {
            throw Error(Errc::ParseError, origin + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(Errc::ParseError, origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!ids.insert(entry.image.image_id).second) {
            throw Error(Errc::DuplicateImageId, origin + ":" + std::to_string(line_no) +
                                                    ": duplicate image_id '" + entry.image.image_id + "'");
        }
        with_attributes += entry.attributes.has_value();
        manifest.entries.push_back(std::move(entry));
    }
    if (with_attributes != 0 && with_attributes != manifest.entries.size()) {
        throw Error(Errc::MixedAttributeCoverage,
                    origin + ": " + std::to_string(with_attributes) + " of " +
                        std::to_string(manifest.entries.size()) + " lines carry attributes");
    }
    return manifest;
}

Manifest ingest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read manifest " + path.string());
    return parse_manifest(in, path.string());
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    for (const auto& e : manifest.entries) {
        nlohmann::ordered_json j;
        j["image_id"] = e.image.image_id;
        j["path"] = e.image.path;
        j["identity_id"] = e.image.identity_id;
        j["split"] = split_name(e.image.split);
        if (e.attributes) {
            nlohmann::ordered_json attrs;
            for (auto key : kAllAttributeKeys) attrs[std::string(key_name(key))] = (*e.attributes)[key_index(key)];
            j["attributes"] = std::move(attrs);
        }
        if (e.caption) j["caption"] = *e.caption;
        out << j.dump() << '\n';
    }
}

std::vector<TextRecord> read_text_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read text corpus " + path.string());
    std::vector<TextRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = json::parse(line);
            out.push_back({j.value("text_id", std::to_string(line_no)), j.at("text").get<std::string>()});
        } catch (const json::exception& e) {
            throw Error(Errc::ParseError, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace gtr
