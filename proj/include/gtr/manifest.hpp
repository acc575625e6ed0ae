#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gtr/core_types.hpp"
#include "gtr/i2a.hpp"

namespace gtr {

struct ManifestEntry {
    ImageRecord image;
    // Ground-truth attribute values, normalized to stored tokens.
    std::optional<AttributeValues> attributes;
    // Held-out human description; only ever used as an evaluation query.
    std::optional<std::string> caption;
};

struct Manifest {
    std::vector<ManifestEntry> entries;

    bool has_attributes() const noexcept;
    bool has_captions() const noexcept;
    std::vector<const ManifestEntry*> split(Split split) const;
    const ManifestEntry* find(std::string_view image_id) const;
    // Attribute rows keyed by image id; empty when the manifest has none.
    TruthTable truth_table() const;
};

// Parses and validates a JSON-lines manifest. Throws ParseError (with the line
// number), DuplicateImageId or MixedAttributeCoverage.
Manifest ingest(const std::filesystem::path& path);
Manifest parse_manifest(std::istream& in, const std::string& origin);

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

// JSON-lines file of {text_id, text} style texts.
std::vector<TextRecord> read_text_corpus(const std::filesystem::path& path);

}  // namespace gtr
