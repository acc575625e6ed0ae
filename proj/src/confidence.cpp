#include "gtr/confidence.hpp"

#include <string>

#include "gtr/core_types.hpp"
#include "gtr/error.hpp"

namespace gtr {

ConfidenceScore ConfidenceScore::from_log(double log_value) {
    if (!std::isfinite(log_value) || log_value > 0.0) {
        throw Error(Errc::ConfidenceOutOfRange,
                    "log confidence " + std::to_string(log_value) + " must be finite and <= 0");
    }
    return ConfidenceScore(log_value);
}

ConfidenceScore ConfidenceScore::from_value(double value) {
    if (!std::isfinite(value) || value <= 0.0 || value > 1.0) {
        throw Error(Errc::ConfidenceOutOfRange,
                    "confidence " + std::to_string(value) + " outside (0, 1]");
    }
    return ConfidenceScore(std::log(value));
}

BetaWeight::BetaWeight(double beta) : beta_(beta) {
    if (!std::isfinite(beta) || beta < 0.0) {
        throw Error(Errc::InvalidArgument, "beta must be finite and >= 0, got " + std::to_string(beta));
    }
}

ConfidenceScore aggregate_confidence(const AttributeSet& answers) {
    if (answers.answers.size() != kNumAttributeKeys) {
        throw Error(Errc::MissingKey, "confidence aggregation needs all 14 answers, got " +
                                          std::to_string(answers.answers.size()));
    }
    double log_sum = 0.0;
    for (const auto& a : answers.answers) {
        if (!(a.confidence >= kConfidenceFloor && a.confidence <= 1.0)) {
            throw Error(Errc::ConfidenceOutOfRange,
                        "confidence " + std::to_string(a.confidence) + " for " +
                            std::string(key_name(a.key)) + " outside [1e-6, 1]");
        }
        log_sum += std::log(a.confidence);
    }
    return ConfidenceScore::from_log(log_sum);
}

double apply_beta(const ConfidenceScore& confidence, BetaWeight beta) {
    return std::exp(beta.value() * confidence.log_value());
}

double confidence_weight(double confidence, double beta) {
    if (beta == 0.0) return 1.0;
    return std::exp(beta * std::log(confidence));
}

}  // namespace gtr
