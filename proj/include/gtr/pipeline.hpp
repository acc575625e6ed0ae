#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gtr/a2t.hpp"
#include "gtr/config.hpp"
#include "gtr/manifest.hpp"
#include "gtr/reference_model.hpp"
#include "gtr/retrieval_eval.hpp"
#include "gtr/trainer.hpp"

namespace gtr {

// Resolves a VQA backend by name. Only "mock" is built in; it answers from the
// manifest's attribute table with the config's noise knobs and a seed derived
// from the run seed. Throws UnknownBackend otherwise.
std::unique_ptr<VqaBackend> make_vqa_backend(const Manifest& manifest, const PipelineConfig& config);

struct GenerationResult {
    std::vector<PseudoCaption> captions;
    std::optional<FinetuneSummary> finetune;  // set in lm mode
    std::size_t style_pairs_skipped = 0;
};

// One pseudo caption per train-split image, sorted by image id. Images are
// spread over config.workers threads; results do not depend on the count.
// A failure on any image aborts the run with the image id in the message.
GenerationResult generate_captions(const Manifest& manifest, const PipelineConfig& config);

// generate_captions, then writes config.captions (and config.style_pairs when
// set and in lm mode).
GenerationResult run_generation(const Manifest& manifest, const PipelineConfig& config);

// Query texts of the given split: the held-out reference captions when the
// source allows and the manifest has them, else template renderings of the
// ground-truth attributes. Returns the texts and the source name used.
std::pair<std::vector<std::string>, std::string> evaluation_queries(const Manifest& manifest, Split split,
                                                                   QuerySource source);

// Each split image contributes one query text and one gallery image; an image
// is relevant to a query when the identities match.
EvalReport evaluate(const RetrievalEncoder& encoder, const Manifest& manifest, Split split, QuerySource source);

struct RunAllResult {
    GenerationResult generation;
    TrainingLog log;
    EvalReport report;
};

// ingest, generate, train, evaluate; writes every artifact named in config.
RunAllResult run_all(const PipelineConfig& config);

void write_report(const std::filesystem::path& path, const EvalReport& report);

// Creates the directory that will hold `path`, if it has one.
void create_parent_dirs(const std::filesystem::path& path);

}  // namespace gtr
