// Writes the synthetic person-search corpus used by the bundled configs.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gtr/error.hpp"
#include "gtr/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic person-search manifest", "gtr_synth"};
    gtr::SyntheticSpec spec;
    std::string manifest_path = "synthetic_manifest.jsonl";
    std::string style_path;
    std::size_t style_count = 300;
    app.add_option("--out", manifest_path, "manifest to write");
    app.add_option("--identities", spec.identities);
    app.add_option("--images-per-identity", spec.images_per_identity);
    app.add_option("--train-identities", spec.train_identities);
    app.add_option("--val-identities", spec.val_identities);
    app.add_option("--seed", spec.seed);
    app.add_option("--style-out", style_path, "also write an unpaired style corpus here");
    app.add_option("--style-count", style_count);
    CLI11_PARSE(app, argc, argv);

    try {
        gtr::write_manifest(manifest_path, gtr::make_synthetic_corpus(spec));
        if (!style_path.empty()) {
            std::ofstream out(style_path, std::ios::binary);
            if (!out) throw gtr::Error(gtr::Errc::IoError, "cannot write " + style_path);
            for (const auto& t : gtr::make_style_corpus(style_count, spec.seed)) {
                nlohmann::ordered_json j;
                j["text_id"] = t.text_id;
                j["text"] = t.text;
                out << j.dump() << '\n';
            }
        }
    } catch (const gtr::Error& e) {
        std::cerr << "GTR-ERR:" << gtr::errc_name(e.code()) << ':' << e.what() << '\n';
        return 1;
    }
    return 0;
}
