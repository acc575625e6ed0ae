#include "doctest.h"

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gtr/confidence.hpp"
#include "gtr/core_types.hpp"
#include "oracles.hpp"

using fixtures::code_of;
using gtr::AttributeKey;
using gtr::Errc;

namespace {

gtr::AttributeSet with_confidences(const std::vector<double>& c) {
    auto set = fixtures::set_of(fixtures::person());
    for (std::size_t i = 0; i < c.size(); ++i) set.answers[i].confidence = c[i];
    return set;
}

}  // namespace

TEST_CASE("all ones aggregate to exactly one") {
    const auto c = gtr::aggregate_confidence(fixtures::set_of(fixtures::person()));
    CHECK(c.value() == 1.0);
    CHECK(c.log_value() == 0.0);
}

TEST_CASE("two halves aggregate to a quarter") {
    auto set = fixtures::set_of(fixtures::person());
    set.answers[gtr::key_index(AttributeKey::Bag)].confidence = 0.5;
    set.answers[gtr::key_index(AttributeKey::Gender)].confidence = 0.5;
    CHECK(gtr::aggregate_confidence(set).value() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("aggregate agrees with the direct product on random tuples") {
    std::mt19937_64 gen(314);
    std::uniform_real_distribution<double> u(gtr::kConfidenceFloor, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> c(14);
        for (auto& x : c) x = u(gen);
        const double expected = oracle::naive_product(c);
        const double got = gtr::aggregate_confidence(with_confidences(c)).value();
        CHECK(std::abs(got - expected) <= 1e-12 * expected);
    }
}

TEST_CASE("aggregation rejects confidences outside [1e-6, 1] and incomplete sets") {
    std::vector<double> c(14, 1.0);
    c[3] = 5e-7;
    CHECK(code_of([&] { gtr::aggregate_confidence(with_confidences(c)); }) == Errc::ConfidenceOutOfRange);
    c[3] = 1.5;
    CHECK(code_of([&] { gtr::aggregate_confidence(with_confidences(c)); }) == Errc::ConfidenceOutOfRange);
    auto short_set = fixtures::set_of(fixtures::person());
    short_set.answers.pop_back();
    CHECK(code_of([&] { gtr::aggregate_confidence(short_set); }) == Errc::MissingKey);
}

TEST_CASE("the floor itself is accepted and stays finite") {
    const std::vector<double> c(14, gtr::kConfidenceFloor);
    const auto score = gtr::aggregate_confidence(with_confidences(c));
    CHECK(std::isfinite(score.log_value()));
    CHECK(score.log_value() == doctest::Approx(14.0 * std::log(1e-6)));
}

TEST_CASE("score value is exp of the stored log") {
    const auto s = gtr::ConfidenceScore::from_log(-3.25);
    CHECK(s.value() == std::exp(-3.25));
    CHECK(gtr::ConfidenceScore::from_value(0.5).log_value() == std::log(0.5));
    CHECK(code_of([] { gtr::ConfidenceScore::from_log(0.1); }) == Errc::ConfidenceOutOfRange);
    CHECK(code_of([] { gtr::ConfidenceScore::from_value(0.0); }) == Errc::ConfidenceOutOfRange);
}

TEST_CASE("apply_beta examples") {
    const auto quarter = gtr::ConfidenceScore::from_value(0.25);
    CHECK(gtr::apply_beta(quarter, gtr::BetaWeight(0.0)) == 1.0);
    CHECK(gtr::apply_beta(gtr::ConfidenceScore::from_value(1.0), gtr::BetaWeight(3.7)) == 1.0);
    CHECK(gtr::apply_beta(quarter, gtr::BetaWeight(0.5)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(code_of([] { gtr::BetaWeight(-1.0); }) == Errc::InvalidArgument);
    CHECK(code_of([] { gtr::BetaWeight(std::nan("")); }) == Errc::InvalidArgument);
}

TEST_CASE("confidence_weight is exactly one at beta zero") {
    for (double c : {1e-6, 0.1, 0.5, 1.0}) CHECK(gtr::confidence_weight(c, 0.0) == 1.0);
    CHECK(gtr::confidence_weight(0.25, 0.5) == doctest::Approx(0.5));
}
