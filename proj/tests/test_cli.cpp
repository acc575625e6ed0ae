#include "doctest.h"

#include <sstream>

#include "fixtures.hpp"
#include "gtr/cli.hpp"
#include "gtr/retrieval_eval.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gtr");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = gtr::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string bundled_config() { return std::string(GTR_SOURCE_DIR) + "/configs/synthetic.conf"; }

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

TEST_CASE("usage errors exit 1 with the usage code") {
    auto r = cli({"train"});
    CHECK(r.code == 1);
    CHECK(starts_with(r.err, "GTR-ERR:usage:"));
    CHECK(r.err.find("--config") != std::string::npos);

    CHECK(cli({}).code == 1);
    CHECK(cli({"frobnicate", "--config", bundled_config()}).code == 1);
    CHECK(cli({"generate", "--config", bundled_config(), "--a2t", "poetry"}).code == 1);
}

TEST_CASE("help exits 0") {
    const auto r = cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("run-all") != std::string::npos);
}

TEST_CASE("an unknown backend exits 2") {
    const auto dir = fixtures::workdir("cli_backend");
    const auto r = cli({"generate", "--config", bundled_config(), "--backend", "blip2", "--out",
                        (dir / "c.jsonl").string()});
    CHECK(r.code == 2);
    CHECK(starts_with(r.err, "GTR-ERR:backend:"));
}

TEST_CASE("other runtime errors exit 1 with their code") {
    auto r = cli({"ingest", "--config", "/nonexistent.conf"});
    CHECK(r.code == 1);
    CHECK(starts_with(r.err, "GTR-ERR:config:"));

    const auto dir = fixtures::workdir("cli_errors");
    fixtures::spit(dir / "c.conf", "manifest = missing.jsonl\n");
    r = cli({"ingest", "--config", (dir / "c.conf").string()});
    CHECK(r.code == 1);
    CHECK(starts_with(r.err, "GTR-ERR:io:"));

    r = cli({"train", "--config", bundled_config(), "--beta", "-1"});
    CHECK(r.code == 1);
    CHECK(starts_with(r.err, "GTR-ERR:config:"));
}

TEST_CASE("run-all on the bundled config writes every artifact") {
    const auto dir = fixtures::workdir("cli_run_all");
    const auto r = cli({"run-all", "--config", bundled_config(), "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    for (const char* name : {"captions.jsonl", "model.json", "report.json", "train_log.csv"}) {
        CAPTURE(name);
        CHECK(std::filesystem::exists(dir / name));
    }
    const auto report = gtr::report_from_json(fixtures::slurp(dir / "report.json"));
    CHECK(r.out == gtr::report_to_kv(report));
    CHECK(report.query_source == "reference");
}

TEST_CASE("the staged subcommands chain and match run-all") {
    const auto dir = fixtures::workdir("cli_staged");
    const auto all = dir / "all";
    REQUIRE(cli({"run-all", "--config", bundled_config(), "--out", all.string()}).code == 0);

    // Stages write through a config that points every artifact into the dir.
    fixtures::spit(dir / "staged.conf", fixtures::slurp(bundled_config()) + "\nmanifest = " + GTR_SOURCE_DIR +
                                            "/data/synthetic_manifest.jsonl\ncaptions = captions.jsonl\n"
                                            "model = model.json\nreport = report.json\ntrain_log = log.csv\n");
    const auto conf = (dir / "staged.conf").string();

    auto r = cli({"ingest", "--config", conf, "--out", (dir / "canonical.jsonl").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("images 200\n") != std::string::npos);
    CHECK(r.out.find("attributes yes\n") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "canonical.jsonl"));

    REQUIRE(cli({"generate", "--config", conf}).code == 0);
    CHECK(fixtures::slurp(dir / "captions.jsonl") == fixtures::slurp(all / "captions.jsonl"));
    REQUIRE(cli({"train", "--config", conf}).code == 0);
    CHECK(fixtures::slurp(dir / "model.json") == fixtures::slurp(all / "model.json"));
    r = cli({"evaluate", "--config", conf, "--out", (dir / "eval.json").string()});
    REQUIRE(r.code == 0);
    CHECK(fixtures::slurp(dir / "eval.json") == fixtures::slurp(all / "report.json"));
}

TEST_CASE("seed and beta overrides change the run") {
    const auto dir = fixtures::workdir("cli_overrides");
    REQUIRE(cli({"generate", "--config", bundled_config(), "--out", (dir / "a.jsonl").string()}).code == 0);
    REQUIRE(cli({"generate", "--config", bundled_config(), "--seed", "8", "--out", (dir / "b.jsonl").string()})
                .code == 0);
    // Noiseless generation does not consume randomness, so the seed leaves the
    // captions unchanged.
    CHECK(fixtures::slurp(dir / "a.jsonl") == fixtures::slurp(dir / "b.jsonl"));

    const auto r1 = cli({"run-all", "--config", bundled_config(), "--out", (dir / "s7").string()});
    const auto r2 = cli({"run-all", "--config", bundled_config(), "--seed", "8", "--out", (dir / "s8").string()});
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    CHECK(fixtures::slurp(dir / "s7/model.json") != fixtures::slurp(dir / "s8/model.json"));
}

TEST_CASE("missing output directories are created") {
    const auto dir = fixtures::workdir("cli_nested");
    REQUIRE(cli({"generate", "--config", bundled_config(), "--out", (dir / "a/b/c.jsonl").string()}).code == 0);
    CHECK(std::filesystem::exists(dir / "a/b/c.jsonl"));
    REQUIRE(cli({"run-all", "--config", bundled_config(), "--out", (dir / "x/y").string()}).code == 0);
    CHECK(std::filesystem::exists(dir / "x/y/report.json"));
}
