#include "doctest.h"

#include <stdexcept>

#include "fixtures.hpp"
#include "gtr/i2a.hpp"

using fixtures::code_of;
using gtr::AttributeKey;
using gtr::Errc;

namespace {

gtr::TruthTable small_table() {
    gtr::TruthTable t;
    t["a"] = fixtures::person("woman", false, true, false, false, true);
    t["b"] = fixtures::person("man", true, false, true, true, false);
    t["b"][0] = "green";
    t["b"][1] = "coat";
    t["c"] = fixtures::person("woman");
    t["c"][0] = "yellow";
    return t;
}

gtr::ImageRecord image(const std::string& id) { return {id, id + ".jpg", "p_" + id, gtr::Split::Train}; }

class ScriptedBackend final : public gtr::VqaBackend {
public:
    std::function<gtr::VqaResponse(std::string_view)> reply;

    std::string_view name() const noexcept override { return "scripted"; }
    gtr::VqaResponse answer(const gtr::ImageRecord&, std::string_view q) const override { return reply(q); }
    std::string caption(const gtr::ImageRecord&) const override { return ""; }
};

}  // namespace

TEST_CASE("the prompt set is the fourteen appendix questions in order") {
    const auto& prompts = gtr::builtin_prompt_set();
    REQUIRE(prompts.size() == 14);
    CHECK(prompts.front().question == "What is the color of the clothes?");
    CHECK(prompts.back().question == "Is the person carrying a bag?");
    CHECK(gtr::prompt_for(AttributeKey::HairLength).question == "Is the person with long hair?");
    CHECK(gtr::prompt_for(AttributeKey::Phone).question == "Is the person holding a mobile phone?");
    for (std::size_t i = 0; i < prompts.size(); ++i) CHECK(prompts[i].key == gtr::kAllAttributeKeys[i]);
}

TEST_CASE("answer normalization") {
    CHECK(gtr::normalize_answer(AttributeKey::Bag, "Yes") == "present");
    CHECK(gtr::normalize_answer(AttributeKey::Bag, "no, she is not") == "absent");
    CHECK(gtr::normalize_answer(AttributeKey::HairLength, " yes ") == "long");
    CHECK(gtr::normalize_answer(AttributeKey::HairLength, "No") == "short");
    CHECK(gtr::normalize_answer(AttributeKey::ClothesColor, "  Red ") == "red");
    CHECK(code_of([] { gtr::normalize_answer(AttributeKey::Glasses, "maybe"); }) == Errc::UnparseableAnswer);
    // "yesterday" and "none" are words of their own, not yes/no.
    CHECK(code_of([] { gtr::normalize_answer(AttributeKey::Glasses, "yesterday"); }) == Errc::UnparseableAnswer);
    CHECK(code_of([] { gtr::normalize_answer(AttributeKey::Glasses, "none"); }) == Errc::UnparseableAnswer);
    CHECK(code_of([] { gtr::normalize_answer(AttributeKey::Gender, "   "); }) == Errc::UnparseableAnswer);
}

TEST_CASE("a noiseless oracle reproduces the truth table") {
    const auto table = small_table();
    gtr::MockOracle oracle({table, 0.0, {1.0, 1.0}, {1.0, 1.0}, 5});
    for (const auto& [id, values] : table) {
        const auto set = gtr::extract_attributes(image(id), oracle);
        CHECK(set == gtr::truth_attribute_set(id, values));
        CHECK_NOTHROW(gtr::validate_attribute_set(set));
    }
}

TEST_CASE("a zero backend confidence is stored at the floor") {
    ScriptedBackend backend;
    backend.reply = [](std::string_view q) {
        const bool yes_no = q.starts_with("Is");
        return gtr::VqaResponse{yes_no ? "no" : "gray", 0.0};
    };
    const auto set = gtr::extract_attributes(image("x"), backend);
    for (const auto& a : set.answers) CHECK(a.confidence == gtr::kConfidenceFloor);
    backend.reply = [](std::string_view q) {
        return gtr::VqaResponse{q.starts_with("Is") ? "yes" : "gray", 3.0};
    };
    for (const auto& a : gtr::extract_attributes(image("x"), backend).answers) CHECK(a.confidence == 1.0);
}

TEST_CASE("backend exceptions become BackendFailure naming the prompt key") {
    ScriptedBackend backend;
    backend.reply = [](std::string_view q) -> gtr::VqaResponse {
        if (q == "What is the color of the hair?") throw std::runtime_error("timeout");
        return {q.starts_with("Is") ? "yes" : "gray", 0.9};
    };
    try {
        gtr::extract_attributes(image("x"), backend);
        FAIL("expected BackendFailure");
    } catch (const gtr::Error& e) {
        CHECK(e.code() == Errc::BackendFailure);
        CHECK(std::string(e.what()).find("hair_color") != std::string::npos);
    }
    backend.reply = [](std::string_view) { return gtr::VqaResponse{"blue", std::nan("")}; };
    CHECK(code_of([&] { gtr::extract_attributes(image("x"), backend); }) == Errc::BackendFailure);
    backend.reply = [](std::string_view) { return gtr::VqaResponse{"blue", 0.5}; };
    CHECK(code_of([&] { gtr::extract_attributes(image("x"), backend); }) == Errc::UnparseableAnswer);
}

TEST_CASE("always flipping negates every variable key") {
    const auto table = small_table();
    gtr::MockOracle oracle({table, 1.0, {1.0, 1.0}, {0.3, 0.3}, 9});
    for (const auto& [id, values] : table) {
        const auto set = gtr::extract_attributes(image(id), oracle);
        for (auto key : gtr::kAllAttributeKeys) {
            if (!gtr::is_variable(key)) continue;
            const auto& truth = values[gtr::key_index(key)];
            const auto expected = truth == "present" ? "absent" : "present";
            CHECK(set.value(key) == expected);
            CHECK(set.at(key).confidence == 0.3);
        }
        // Text keys move to a different value drawn from the observed vocabulary.
        CHECK(set.value(AttributeKey::ClothesColor) != values[0]);
        const auto& vocab = oracle.vocabulary(AttributeKey::ClothesColor);
        CHECK(std::find(vocab.begin(), vocab.end(), set.value(AttributeKey::ClothesColor)) != vocab.end());
    }
}

TEST_CASE("the oracle is deterministic and call-order independent") {
    const auto table = small_table();
    gtr::MockOracle oracle({table, 0.5, {0.8, 1.0}, {0.2, 0.6}, 42});
    const auto first = oracle.respond("b", AttributeKey::Umbrella);
    for (auto key : gtr::kAllAttributeKeys) oracle.respond("a", key);
    CHECK(oracle.respond("b", AttributeKey::Umbrella) == first);
    gtr::MockOracle twin({table, 0.5, {0.8, 1.0}, {0.2, 0.6}, 42});
    CHECK(gtr::mock_oracle_answer(twin, "b", gtr::prompt_for(AttributeKey::Umbrella)) == first);
}

TEST_CASE("noiseless degenerate oracle answers the truth with confidence one") {
    gtr::MockOracle oracle({small_table(), 0.0, {1.0, 1.0}, {1.0, 1.0}, 1});
    const auto r = gtr::mock_oracle_answer(oracle, "a", gtr::prompt_for(AttributeKey::Bag));
    CHECK(r.raw_answer == "yes");
    CHECK(r.confidence == 1.0);
}

TEST_CASE("empirical flip rate over 10,000 draws is 0.3 within 0.02") {
    gtr::TruthTable table;
    for (int i = 0; i < 715; ++i) table["img" + std::to_string(i)] = fixtures::person(i % 2 ? "man" : "woman");
    // Disjoint confidence laws reveal which draws were flipped.
    gtr::MockOracle oracle({table, 0.3, {0.9, 1.0}, {0.1, 0.2}, 2024});
    int draws = 0, flips = 0;
    for (const auto& [id, values] : table) {
        for (auto key : gtr::kAllAttributeKeys) {
            ++draws;
            flips += oracle.respond(id, key).confidence < 0.5;
        }
    }
    CHECK(draws >= 10000);
    CHECK(std::abs(static_cast<double>(flips) / draws - 0.3) <= 0.02);
}

TEST_CASE("unknown images and malformed configs") {
    gtr::MockOracle oracle({small_table(), 0.0, {1.0, 1.0}, {1.0, 1.0}, 1});
    CHECK(code_of([&] { oracle.respond("zzz", AttributeKey::Bag); }) == Errc::UnknownImage);
    CHECK(code_of([&] { oracle.answer(image("a"), "How tall is the person?"); }) == Errc::BackendFailure);
    CHECK(code_of([] { gtr::MockOracle({{}, 1.5, {1, 1}, {1, 1}, 0}); }) == Errc::InvalidArgument);
    CHECK(code_of([] { gtr::MockOracle({{}, 0.1, {0.0, 1.0}, {1, 1}, 0}); }) == Errc::InvalidArgument);
    CHECK(code_of([] { gtr::MockOracle({{}, 0.1, {1, 1}, {0.7, 0.6}, 0}); }) == Errc::InvalidArgument);
}

TEST_CASE("the mock caption is a coarse gender description") {
    gtr::MockOracle oracle({small_table(), 0.0, {1.0, 1.0}, {1.0, 1.0}, 1});
    CHECK(oracle.caption(image("b")) == "a photo of a man");
}
