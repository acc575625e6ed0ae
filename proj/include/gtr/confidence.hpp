#pragma once

#include <cmath>

namespace gtr {

struct AttributeSet;

// Lower clamp applied to every per-attribute confidence coming out of a VQA
// backend. Keeps the log-space product finite.
inline constexpr double kConfidenceFloor = 1e-6;

// Caption-level confidence, stored canonically as its logarithm.
class ConfidenceScore {
public:
    ConfidenceScore() = default;

    // log_value must be finite and <= 0.
    static ConfidenceScore from_log(double log_value);
    // value must lie in (0, 1].
    static ConfidenceScore from_value(double value);

    double log_value() const noexcept { return log_value_; }
    double value() const noexcept { return value_; }

    friend bool operator==(const ConfidenceScore&, const ConfidenceScore&) = default;

private:
    explicit ConfidenceScore(double log_value)
        : log_value_(log_value), value_(std::exp(log_value)) {}

    double log_value_ = 0.0;
    double value_ = 1.0;
};

class BetaWeight {
public:
    BetaWeight() = default;
    // Throws InvalidArgument on negative or non-finite beta.
    explicit BetaWeight(double beta);

    double value() const noexcept { return beta_; }

private:
    double beta_ = 0.0;
};

// Joint confidence of a caption under the independence assumption: the
// product of the 14 attribute confidences, accumulated as a sum of logs.
// Throws ConfidenceOutOfRange if any confidence lies outside [1e-6, 1].
ConfidenceScore aggregate_confidence(const AttributeSet& answers);

// C^beta, computed as exp(beta * log C).
double apply_beta(const ConfidenceScore& confidence, BetaWeight beta);

// Same weighting applied to a raw confidence in (0, 1]; used by the loss
// kernels, which receive plain per-row confidences.
double confidence_weight(double confidence, double beta);

}  // namespace gtr
