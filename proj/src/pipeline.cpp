#include "gtr/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <thread>

#include "gtr/caption_records.hpp"
#include "gtr/confidence.hpp"
#include "gtr/error.hpp"
#include "gtr/noun_phrase.hpp"
#include "gtr/rng.hpp"

namespace gtr {

std::unique_ptr<VqaBackend> make_vqa_backend(const Manifest& manifest, const PipelineConfig& config) {
    if (config.vqa_backend != "mock") {
        throw Error(Errc::UnknownBackend, "unknown VQA backend '" + config.vqa_backend + "'");
    }
    if (!manifest.has_attributes()) {
        throw Error(Errc::ConfigError, "the mock backend needs ground-truth attributes in the manifest");
    }
    MockOracleConfig mock;
    mock.truth_table = manifest.truth_table();
    mock.flip_probability = config.mock_flip_probability;
    mock.confidence_law_correct = config.mock_confidence_correct;
    mock.confidence_law_flipped = config.mock_confidence_flipped;
    mock.seed = derive_seed(config.seed, "generation/mock");
    return std::make_unique<MockOracle>(std::move(mock));
}

namespace {

PseudoCaption caption_one(const ImageRecord& image, const VqaBackend& vqa, const A2TBackend* a2t) {
    AttributeSet set = extract_attributes(image, vqa);
    const ConfidenceScore confidence = aggregate_confidence(set);
    std::string ic = vqa.caption(image);
    std::string text = a2t ? a2t->convert(attribute_sequence(set)) : render_template(set);
    return compose_pseudo_caption(std::move(text), std::move(ic), std::move(set), confidence,
                                  a2t ? CaptionSource::Lm : CaptionSource::Template);
}

}  // namespace

GenerationResult generate_captions(const Manifest& manifest, const PipelineConfig& config) {
    validate_config(config, false);
    const auto vqa = make_vqa_backend(manifest, config);

    GenerationResult result;
    std::unique_ptr<A2TBackend> a2t;
    if (config.a2t_mode == CaptionSource::Lm) {
        a2t = make_a2t_backend(config.a2t_backend);
        if (config.text_corpus.empty()) {
            throw Error(Errc::ConfigError, "lm mode needs text_corpus for the style pairs");
        }
        const auto build = build_style_pairs(read_text_corpus(config.text_corpus), ReferenceChunker{});
        result.finetune = a2t->finetune(build.pairs);
        result.style_pairs_skipped = build.skipped;
        if (!config.style_pairs.empty()) {
            create_parent_dirs(config.style_pairs);
            write_style_pairs(config.style_pairs.string(), build.pairs);
        }
    }

    auto images = manifest.split(Split::Train);
    std::sort(images.begin(), images.end(),
              [](const ManifestEntry* a, const ManifestEntry* b) { return a->image.image_id < b->image.image_id; });

    const std::size_t n = images.size();
    std::vector<std::optional<PseudoCaption>> slots(n);
    std::vector<std::exception_ptr> failures(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i] = caption_one(images[i]->image, *vqa, a2t.get());
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // Report the first failing image in id order, whatever thread hit it.
    for (std::size_t i = 0; i < n; ++i) {
        if (!failures[i]) continue;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const Error& e) {
            throw Error(e.code(), "image '" + images[i]->image.image_id + "': " + e.what());
        }
    }
    result.captions.reserve(n);
    for (auto& s : slots) result.captions.push_back(std::move(*s));
    return result;
}

GenerationResult run_generation(const Manifest& manifest, const PipelineConfig& config) {
    auto result = generate_captions(manifest, config);
    create_parent_dirs(config.captions);
    write_captions(config.captions, result.captions);
    return result;
}

std::pair<std::vector<std::string>, std::string> evaluation_queries(const Manifest& manifest, Split split,
                                                                   QuerySource source) {
    const auto entries = manifest.split(split);
    bool use_reference = false;
    switch (source) {
        case QuerySource::Reference:
            if (!manifest.has_captions()) {
                throw Error(Errc::ConfigError, "query_source = reference but the manifest has no captions");
            }
            use_reference = true;
            break;
        case QuerySource::Template:
            break;
        case QuerySource::Auto:
            use_reference = manifest.has_captions();
            break;
    }
    std::vector<std::string> texts;
    texts.reserve(entries.size());
    for (const auto* e : entries) {
        if (use_reference) {
            if (!e->caption) {
                throw Error(Errc::InvalidArgument, "image '" + e->image.image_id + "' has no reference caption");
            }
            texts.push_back(*e->caption);
        } else {
            if (!e->attributes) {
                throw Error(Errc::InvalidArgument,
                            "image '" + e->image.image_id + "' has neither a caption nor attributes to query with");
            }
            texts.push_back(render_template(truth_attribute_set(e->image.image_id, *e->attributes)));
        }
    }
    return {std::move(texts), use_reference ? "reference" : "template"};
}

EvalReport evaluate(const RetrievalEncoder& encoder, const Manifest& manifest, Split split, QuerySource source) {
    const auto entries = manifest.split(split);
    if (entries.empty()) {
        throw Error(Errc::DegenerateCorpus, "split '" + std::string(split_name(split)) + "' has no images");
    }
    auto [texts, used] = evaluation_queries(manifest, split, source);
    EvalCorpus corpus;
    corpus.query_embeddings = encoder.encode_texts(texts);
    corpus.gallery_embeddings = encoder.encode_images(entries);
    for (const auto* e : entries) {
        corpus.query_identities.push_back(e->image.identity_id);
        corpus.gallery_identities.push_back(e->image.identity_id);
    }
    EvalReport report = evaluate_corpus(corpus);
    report.query_source = used;
    return report;
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
    create_parent_dirs(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write report " + path.string());
    out << report_to_json(report);
}

void create_parent_dirs(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
}

RunAllResult run_all(const PipelineConfig& config) {
    validate_config(config, true);
    const Manifest manifest = ingest(config.manifest);
    RunAllResult result;
    result.generation = run_generation(manifest, config);
    // Train from the persisted file so run-all sees exactly what `train` would.
    auto outcome = train(read_captions(config.captions), manifest, config);
    create_parent_dirs(config.model);
    create_parent_dirs(config.train_log);
    outcome.model.save(config.model);
    outcome.log.write_csv(config.train_log);
    result.log = std::move(outcome.log);
    result.report = evaluate(outcome.model, manifest, config.eval_split, config.query_source);
    write_report(config.report, result.report);
    return result;
}

}  // namespace gtr
