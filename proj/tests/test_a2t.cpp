#include "doctest.h"

#include <algorithm>

#include "fixtures.hpp"
#include "golden.hpp"
#include "gtr/a2t.hpp"
#include "gtr/confidence.hpp"
#include "gtr/noun_phrase.hpp"
#include "gtr/synthetic.hpp"

using fixtures::code_of;
using gtr::AttributeKey;
using gtr::Errc;

TEST_CASE("template golden cases render byte-identically") {
    const auto cases = golden::template_cases();
    REQUIRE(cases.size() == 10);
    for (const auto& c : cases) {
        CAPTURE(c.name);
        CHECK(gtr::render_template(c.set) == c.expected);
    }
}

TEST_CASE("with nothing carried and no bike the caption is one sentence") {
    const auto text = gtr::render_template(fixtures::set_of(fixtures::person("man")));
    CHECK(std::count(text.begin(), text.end(), '.') == 1);
    CHECK(text.back() == '.');
}

TEST_CASE("rendering is deterministic") {
    const auto set = fixtures::set_of(fixtures::person("woman", true, false, true, true, true));
    CHECK(gtr::render_template(set) == gtr::render_template(set));
}

TEST_CASE("pronoun follows whole words of the gender token") {
    CHECK(gtr::pronoun_for("man") == "He");
    CHECK(gtr::pronoun_for("Male") == "He");
    CHECK(gtr::pronoun_for("young boy") == "He");
    CHECK(gtr::pronoun_for("woman") == "She");
    CHECK(gtr::pronoun_for("female") == "She");
    CHECK(gtr::pronoun_for("girl") == "She");
    CHECK(gtr::pronoun_for("person") == "She");
}

TEST_CASE("the reference chunker on a simple sentence") {
    gtr::ReferenceChunker chunker;
    CHECK(chunker.noun_phrases("The woman wears a red shirt.") == std::vector<std::string>{"The woman", "a red shirt"});
    CHECK(chunker.noun_phrases("He is carrying a black leather bag and a phone.") ==
          std::vector<std::string>{"a black leather bag", "a phone"});
    CHECK(chunker.noun_phrases("Walking slowly, the man holds his umbrella.") ==
          std::vector<std::string>{"the man", "his umbrella"});
    CHECK(chunker.noun_phrases("!!! ... ???").empty());
}

TEST_CASE("punctuation breaks a phrase") {
    gtr::ReferenceChunker chunker;
    CHECK(chunker.noun_phrases("a red, blue shirt") == std::vector<std::string>{"blue shirt"});
}

TEST_CASE("style attributes are deduplicated and keep first-occurrence order") {
    gtr::ReferenceChunker chunker;
    const gtr::TextRecord text{"t1", "A man in a red coat. The man in a red coat has a bag."};
    CHECK(gtr::extract_style_attributes(text, chunker) ==
          std::vector<std::string>{"A man", "a red coat", "The man", "a bag"});
    CHECK(code_of([&] { gtr::extract_style_attributes({"t2", ""}, chunker); }) == Errc::InvalidArgument);
    CHECK(code_of([&] { gtr::extract_style_attributes({"t3", "is and, with."}, chunker); }) ==
          Errc::EmptyExtraction);
}

TEST_CASE("style pairs skip texts without noun phrases") {
    gtr::ReferenceChunker chunker;
    const std::vector<gtr::TextRecord> corpus = {{"a", "A woman in a long dress."},
                                                 {"b", "?!..."},
                                                 {"c", "The boy rides a green bike."},
                                                 {"d", "A man with a bag."}};
    const auto build = gtr::build_style_pairs(corpus, chunker);
    CHECK(build.pairs.size() == 3);
    CHECK(build.skipped == 1);
    CHECK(build.pairs[1].joined_attributes() == "The boy a green bike");
    CHECK(code_of([&] { gtr::build_style_pairs({}, chunker); }) == Errc::InvalidArgument);
}

TEST_CASE("style pair files carry space-joined attributes") {
    const auto dir = fixtures::workdir("style_pairs");
    const std::vector<gtr::StylePair> pairs = {{{"The woman", "a red shirt"}, "The woman wears a red shirt."}};
    gtr::write_style_pairs((dir / "p.jsonl").string(), pairs);
    CHECK(fixtures::slurp(dir / "p.jsonl") ==
          "{\"attributes\":\"The woman a red shirt\",\"text\":\"The woman wears a red shirt.\"}\n");
    const auto back = gtr::read_style_pairs((dir / "p.jsonl").string());
    REQUIRE(back.size() == 1);
    CHECK(back[0].joined_attributes() == pairs[0].joined_attributes());
    CHECK(back[0].text == pairs[0].text);
}

TEST_CASE("the attribute sequence lists phrases in template order") {
    const auto set = fixtures::set_of(fixtures::person("man", true, false, false, true, true));
    const auto seq = gtr::attribute_sequence(set);
    CHECK(seq.words == std::vector<std::string>{"man", "black long hair", "red shirt", "blue jeans",
                                                "white sneakers", "bag", "glasses", "bike"});
    CHECK(seq.source == set);
}

TEST_CASE("echo-template backend renders the template and records corpus statistics") {
    auto backend = gtr::make_a2t_backend("echo-template");
    const auto summary = backend->finetune({{{"A man"}, "A man walks."}, {{"a bag"}, "She has a bag."}});
    CHECK(summary.pairs == 2);
    CHECK(summary.target_tokens == 7);
    const auto set = fixtures::set_of(fixtures::person());
    CHECK(backend->convert(gtr::attribute_sequence(set)) == gtr::render_template(set));
    CHECK(code_of([] { gtr::make_a2t_backend("gpt-2"); }) == Errc::UnknownBackend);
}

TEST_CASE("caption composition joins with a single space") {
    const auto set = fixtures::set_of(fixtures::person());
    const auto c = gtr::aggregate_confidence(set);
    const auto joined = gtr::compose_pseudo_caption("A man in red.", "a person walking", set, c,
                                                    gtr::CaptionSource::Template);
    CHECK(joined.text == "A man in red. a person walking");
    CHECK(joined.ic_caption == "a person walking");
    CHECK(joined.confidence == c);
    const auto alone = gtr::compose_pseudo_caption("A man in red.", "", set, c, gtr::CaptionSource::Lm);
    CHECK(alone.text == "A man in red.");
    CHECK(alone.source == gtr::CaptionSource::Lm);
    CHECK(gtr::compose_pseudo_caption("A man in red.", "x", set, c, gtr::CaptionSource::Lm) ==
          gtr::compose_pseudo_caption("A man in red.", "x", set, c, gtr::CaptionSource::Lm));
    CHECK(code_of([&] { gtr::compose_pseudo_caption("", "x", set, c, gtr::CaptionSource::Lm); }) ==
          Errc::InvalidArgument);
}
