#include "doctest.h"

#include <sstream>

#include "fixtures.hpp"
#include "gtr/caption_records.hpp"
#include "gtr/config.hpp"
#include "gtr/confidence.hpp"
#include "gtr/manifest.hpp"

using fixtures::code_of;
using gtr::Errc;

namespace {

const char* kAttrs =
    R"("attributes":{"clothes_color":"red","clothes_style":"shirt","pants_color":"blue","pants_style":"jeans",)"
    R"("shoes_color":"white","shoes_style":"sneakers","gender":"woman","hair_color":"black","hair_length":"long",)"
    R"("glasses":true,"phone":"no","umbrella":"absent","bike":"present","bag":false})";

std::string line(const std::string& id, const std::string& identity, const std::string& split, bool attrs = true) {
    std::string s = R"({"image_id":")" + id + R"(","path":"p/)" + id + R"(.jpg","identity_id":")" + identity +
                    R"(","split":")" + split + "\"";
    if (attrs) s += std::string(",") + kAttrs;
    return s + "}\n";
}

gtr::Manifest parse(const std::string& text) {
    std::istringstream in(text);
    return gtr::parse_manifest(in, "inline");
}

}  // namespace

TEST_CASE("a valid three-line manifest") {
    const auto m = parse(line("a", "p1", "train") + "\n" + line("b", "p1", "test") + line("c", "p2", "val"));
    REQUIRE(m.entries.size() == 3);
    CHECK(m.has_attributes());
    CHECK_FALSE(m.has_captions());
    CHECK(m.split(gtr::Split::Train).size() == 1);
    CHECK(m.find("b")->image.split == gtr::Split::Test);
    CHECK(m.find("zzz") == nullptr);
    // Boolean spellings are normalized to canonical tokens.
    const auto& values = *m.find("a")->attributes;
    CHECK(values[gtr::key_index(gtr::AttributeKey::Glasses)] == "present");
    CHECK(values[gtr::key_index(gtr::AttributeKey::Phone)] == "absent");
    CHECK(values[gtr::key_index(gtr::AttributeKey::Bag)] == "absent");
    CHECK(m.truth_table().size() == 3);
}

TEST_CASE("manifest validation errors") {
    CHECK(code_of([] { parse(line("a", "p", "train") + line("a", "q", "test")); }) == Errc::DuplicateImageId);
    CHECK(code_of([] { parse(line("a", "p", "train") + line("b", "q", "test", false)); }) ==
          Errc::MixedAttributeCoverage);
    try {
        parse(line("a", "p", "train") + "{not json\n");
        FAIL("expected ParseError");
    } catch (const gtr::Error& e) {
        CHECK(e.code() == Errc::ParseError);
        CHECK(std::string(e.what()).find("inline:2") != std::string::npos);
    }
    CHECK(code_of([] { parse(line("a", "p", "holdout")); }) == Errc::ParseError);
    CHECK(code_of([] { gtr::ingest("/nonexistent/manifest.jsonl"); }) == Errc::IoError);
}

TEST_CASE("manifests without attributes are accepted") {
    const auto m = parse(line("a", "p", "train", false) + line("b", "p", "test", false));
    CHECK_FALSE(m.has_attributes());
    CHECK(m.truth_table().empty());
}

TEST_CASE("manifest write and re-ingest round-trip") {
    const auto dir = fixtures::workdir("manifest_rt");
    const auto m = parse(line("a", "p1", "train") + line("b", "p2", "test"));
    gtr::write_manifest(dir / "m.jsonl", m);
    const auto back = gtr::ingest(dir / "m.jsonl");
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[1].image == m.entries[1].image);
    CHECK(back.entries[0].attributes == m.entries[0].attributes);
}

TEST_CASE("caption records round-trip exactly") {
    auto set = fixtures::set_of(fixtures::person("woman", true));
    set.answers[3].confidence = 0.1 + 0.2;
    set.answers[7].confidence = 1.0 / 3.0;
    set.answers[7].raw_answer = "Black.";
    gtr::PseudoCaption c;
    c.image_id = set.image_id;
    c.text = "She wears \"quoted\" things.\nNew line.";
    c.confidence = gtr::aggregate_confidence(set);
    c.source = gtr::CaptionSource::Lm;
    c.ic_caption = "a photo of a woman";
    c.attribute_set = set;
    const auto line = gtr::caption_to_json_line(c);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(gtr::caption_from_json_line(line) == c);

    const auto dir = fixtures::workdir("captions_rt");
    gtr::write_captions(dir / "c.jsonl", {c, c});
    CHECK(gtr::read_captions(dir / "c.jsonl") == std::vector<gtr::PseudoCaption>{c, c});
}

TEST_CASE("a stored confidence that disagrees with its attributes is rejected") {
    const auto set = fixtures::set_of(fixtures::person());
    gtr::PseudoCaption c;
    c.image_id = set.image_id;
    c.text = "x";
    c.attribute_set = set;
    c.confidence = gtr::ConfidenceScore::from_value(0.5);
    CHECK(code_of([&] { gtr::caption_from_json_line(gtr::caption_to_json_line(c)); }) == Errc::ParseError);
    CHECK(code_of([] { gtr::caption_from_json_line("{}"); }) == Errc::ParseError);
    CHECK(code_of([] { gtr::caption_from_json_line("[1,"); }) == Errc::ParseError);
}

TEST_CASE("config files resolve paths against their directory") {
    const auto dir = fixtures::workdir("config_load");
    fixtures::spit(dir / "a.conf",
                   "# comment\nmanifest = data/m.jsonl\nbeta = 0.5  # trailing\nloss_set = itc, sdm\n"
                   "mock_confidence_flipped = 0.2,0.6\neval_split = val\nreport = /abs/r.json\n");
    const auto c = gtr::load_config(dir / "a.conf");
    CHECK(c.manifest == dir / "data/m.jsonl");
    CHECK(c.report == "/abs/r.json");
    CHECK(c.beta == 0.5);
    CHECK(c.loss_set == gtr::LossSet{true, false, true, false, false});
    CHECK(c.mock_confidence_flipped.lo == 0.2);
    CHECK(c.mock_confidence_flipped.hi == 0.6);
    CHECK(c.eval_split == gtr::Split::Val);
    CHECK(gtr::format_loss_set(c.loss_set) == "itc,sdm");
}

TEST_CASE("config errors") {
    gtr::PipelineConfig c;
    CHECK(code_of([&] { gtr::set_config_value(c, "no_such_key", "1"); }) == Errc::ConfigError);
    CHECK(code_of([&] { gtr::set_config_value(c, "beta", "abc"); }) == Errc::ConfigError);
    CHECK(code_of([&] { gtr::set_config_value(c, "epochs", "-3"); }) == Errc::ConfigError);
    CHECK(code_of([&] { gtr::set_config_value(c, "loss_set", "itc,xyz"); }) == Errc::ConfigError);
    CHECK(code_of([&] { gtr::set_config_value(c, "a2t_mode", "gpt"); }) == Errc::ConfigError);
    CHECK(code_of([] { gtr::load_config("/nonexistent.conf"); }) == Errc::ConfigError);

    gtr::PipelineConfig bad;
    bad.beta = -0.1;
    CHECK(code_of([&] { gtr::validate_config(bad, false); }) == Errc::ConfigError);
    bad = {};
    bad.loss_set = {};
    CHECK_NOTHROW(gtr::validate_config(bad, false));
    CHECK(code_of([&] { gtr::validate_config(bad, true); }) == Errc::ConfigError);
    bad = {};
    bad.batch_size = 1;
    CHECK(code_of([&] { gtr::validate_config(bad, true); }) == Errc::ConfigError);
}
