#pragma once

#include <filesystem>
#include <vector>

#include "gtr/config.hpp"
#include "gtr/core_types.hpp"
#include "gtr/manifest.hpp"
#include "gtr/reference_model.hpp"

namespace gtr {

struct LossBreakdown {
    double itc = 0.0;
    double itm = 0.0;
    double sdm = 0.0;
    double irr = 0.0;
    double id = 0.0;
    double total = 0.0;

    LossBreakdown& operator+=(const LossBreakdown& o);
    LossBreakdown scaled(double s) const;
};

struct EpochRecord {
    std::size_t epoch = 0;
    std::size_t steps = 0;
    LossBreakdown mean;
};

struct TrainingLog {
    std::vector<LossBreakdown> steps;
    std::vector<EpochRecord> epochs;

    void write_csv(const std::filesystem::path& path) const;
};

struct TrainingOutcome {
    ReferenceRetrievalModel model;
    TrainingLog log;
};

// Mini-batch Adam over the selected confidence-weighted losses. Each training
// image is paired with its pseudo caption, whose confidence weights every
// loss term of that sample. Deterministic for a fixed config and seed.
// Throws EmptyTrainSet when no caption matches a train-split image, and
// NonFiniteLoss (naming epoch and step) if the objective diverges.
TrainingOutcome train(const std::vector<PseudoCaption>& captions, const Manifest& manifest,
                      const PipelineConfig& config);

}  // namespace gtr
