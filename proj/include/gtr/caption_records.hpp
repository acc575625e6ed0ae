#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gtr/core_types.hpp"

namespace gtr {

// One JSON object per line:
//   {image_id, text, confidence, log_confidence, source, ic_caption,
//    attributes: [{key, value, confidence, raw_answer}, ...]}
// Doubles are written in shortest round-trip form, so parsing restores the
// exact bits.
std::string caption_to_json_line(const PseudoCaption& caption);

// Throws ParseError on malformed lines, and when the stored confidence does
// not match the product of the attribute confidences within 1e-12.
PseudoCaption caption_from_json_line(const std::string& line);

void write_captions(const std::filesystem::path& path, const std::vector<PseudoCaption>& captions);
std::vector<PseudoCaption> read_captions(const std::filesystem::path& path);

}  // namespace gtr
