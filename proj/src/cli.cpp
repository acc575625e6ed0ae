#include "gtr/cli.hpp"

#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "gtr/caption_records.hpp"
#include "gtr/error.hpp"
#include "gtr/pipeline.hpp"

namespace gtr {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> beta;
    std::optional<std::string> a2t;
    std::optional<std::string> backend;
    std::optional<std::string> out;
};

PipelineConfig resolve_config(const Options& o) {
    PipelineConfig c = load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (o.beta) set_config_value(c, "beta", *o.beta);
    if (o.a2t) set_config_value(c, "a2t_mode", *o.a2t);
    if (o.backend) c.vqa_backend = *o.backend;
    return c;
}

void print_report(std::ostream& out, const EvalReport& r) { out << report_to_kv(r); }

int cmd_ingest(const PipelineConfig& c, const Options& o, std::ostream& out) {
    const Manifest m = ingest(c.manifest);
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& e : m.entries) ++counts[static_cast<int>(e.image.split)];
    out << "images " << m.entries.size() << "\ntrain " << counts[0] << "\nval " << counts[1] << "\ntest "
        << counts[2] << "\nattributes " << (m.has_attributes() ? "yes" : "no") << "\ncaptions "
        << (m.has_captions() ? "yes" : "no") << '\n';
    // --out writes the validated manifest back in canonical form.
    if (o.out) {
        create_parent_dirs(*o.out);
        write_manifest(*o.out, m);
    }
    return 0;
}

int cmd_generate(PipelineConfig c, const Options& o, std::ostream& out) {
    if (o.out) c.captions = *o.out;
    const auto result = run_generation(ingest(c.manifest), c);
    out << "captions " << result.captions.size() << " -> " << c.captions.string() << '\n';
    return 0;
}

int cmd_train(PipelineConfig c, const Options& o, std::ostream& out) {
    if (o.out) c.model = *o.out;
    const Manifest m = ingest(c.manifest);
    auto outcome = train(read_captions(c.captions), m, c);
    create_parent_dirs(c.model);
    create_parent_dirs(c.train_log);
    outcome.model.save(c.model);
    outcome.log.write_csv(c.train_log);
    out << "steps " << outcome.log.steps.size() << " -> " << c.model.string() << '\n';
    return 0;
}

int cmd_evaluate(PipelineConfig c, const Options& o, std::ostream& out) {
    if (o.out) c.report = *o.out;
    const Manifest m = ingest(c.manifest);
    const auto model = ReferenceRetrievalModel::load(c.model);
    const auto report = evaluate(model, m, c.eval_split, c.query_source);
    write_report(c.report, report);
    print_report(out, report);
    return 0;
}

int cmd_run_all(PipelineConfig c, const Options& o, std::ostream& out) {
    // --out names a directory that receives every artifact of the run.
    if (o.out) {
        const fs::path dir = *o.out;
        c.captions = dir / "captions.jsonl";
        c.model = dir / "model.json";
        c.report = dir / "report.json";
        c.train_log = dir / "train_log.csv";
        if (!c.style_pairs.empty()) c.style_pairs = dir / "style_pairs.jsonl";
    }
    const auto result = run_all(c);
    print_report(out, result.report);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generation-then-retrieval pipeline for text-based person search", "gtr"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "pipeline config file")->required();
        sub->add_option("--seed", o.seed, "overrides the config seed");
        sub->add_option("--beta", o.beta, "confidence exponent of the training losses");
        sub->add_option("--a2t", o.a2t, "attributes-to-text mode")->check(CLI::IsMember({"template", "lm"}));
        sub->add_option("--backend", o.backend, "VQA backend name");
        sub->add_option("--out", o.out, "output path of the subcommand's main artifact");
    };
    auto* ingest_cmd = app.add_subcommand("ingest", "validate a dataset manifest");
    auto* generate_cmd = app.add_subcommand("generate", "write pseudo captions for the train split");
    auto* train_cmd = app.add_subcommand("train", "train the reference retrieval model");
    auto* evaluate_cmd = app.add_subcommand("evaluate", "score a trained model on the evaluation split");
    auto* run_all_cmd = app.add_subcommand("run-all", "generate, train and evaluate in one go");
    for (auto* sub : {ingest_cmd, generate_cmd, train_cmd, evaluate_cmd, run_all_cmd}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "GTR-ERR:usage:" << e.what() << '\n' << app.help();
        return 1;
    }

    try {
        const PipelineConfig config = resolve_config(o);
        // Reject bad knobs before touching any file.
        validate_config(config, train_cmd->parsed() || run_all_cmd->parsed());
        if (ingest_cmd->parsed()) return cmd_ingest(config, o, out);
        if (generate_cmd->parsed()) return cmd_generate(config, o, out);
        if (train_cmd->parsed()) return cmd_train(config, o, out);
        if (evaluate_cmd->parsed()) return cmd_evaluate(config, o, out);
        return cmd_run_all(config, o, out);
    } catch (const Error& e) {
        err << "GTR-ERR:" << errc_name(e.code()) << ':' << e.what() << '\n';
        return is_backend_error(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        err << "GTR-ERR:internal:" << e.what() << '\n';
        return 1;
    }
}

}  // namespace gtr
