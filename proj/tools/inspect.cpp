// inspect: referential fabric inspection from the command line.
//
//   inspect run   --ref R --test T [--truth G] [--config C] [--out DIR] [--window W]
//   inspect batch --manifest M [--config C] [--out DIR] [--window W]
//   inspect synth --seed S --kind K --out DIR
//
// Exit codes: 0 success, 1 usage error, 2 processing failure.

#include "fabric/codec.hpp"
#include "fabric/eval.hpp"
#include "fabric/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace fabric;

namespace {

constexpr int kUsage = 1;
constexpr int kFailure = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

pipeline::PipelineConfig make_config(const std::string& path, int window) {
    pipeline::PipelineConfig cfg;
    try {
        if (!path.empty()) cfg = pipeline::load_config(path);
        if (window != 0) {
            cfg.tile = window;
            cfg.stride = window;
        }
        pipeline::validate(cfg);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

void print_timings(const pipeline::StageTimings& t) {
    for (const auto& [stage, ms] : t) std::cout << "  " << stage << ": " << ms << " ms\n";
}

int cmd_run(const std::string& ref, const std::string& test, const std::string& truth, const std::string& config,
            const std::string& out, int window) {
    const auto cfg = make_config(config, window);
    std::optional<fs::path> truth_path, out_dir;
    if (!truth.empty()) truth_path = truth;
    if (!out.empty()) out_dir = fs::path(out) / fs::path(test).stem();
    const auto res = pipeline::run_pair(ref, test, cfg, truth_path, out_dir);
    std::cout << res.status() << "\n";
    if (res.gamma) std::cout << "gamma: " << *res.gamma << "\n";
    std::cout << "timings:\n";
    print_timings(res.timings_ms);
    if (out_dir) std::cout << "artifacts: " << out_dir->string() << "\n";
    return 0;
}

int cmd_batch(const std::string& manifest, const std::string& config, const std::string& out, int window) {
    const auto cfg = make_config(config, window);
    std::vector<pipeline::ManifestEntry> entries;
    try {
        entries = pipeline::load_manifest(manifest);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::optional<fs::path> out_dir;
    if (!out.empty()) out_dir = out;
    const auto batch = pipeline::run_batch(entries, cfg, out_dir);
    std::cout << batch.to_json() << "\n";
    return batch.failures == 0 ? 0 : kFailure;
}

int cmd_synth(std::uint64_t seed, const std::string& kind, const std::string& out) {
    eval::DefectKind k;
    try {
        k = eval::parse_defect_kind(kind);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const eval::DefectSpec spec = eval::random_defect(k, seed);
    const eval::SyntheticPair pair = eval::generate_synthetic_pair(seed, spec);
    fs::create_directories(out);
    save_gray(fs::path(out) / "reference.png", pair.reference);
    save_gray(fs::path(out) / "test.png", pair.test);
    save_mask(fs::path(out) / "truth.png", pair.truth);
    std::cout << "wrote " << out << "/{reference,test,truth}.png (" << kind << ", truth " << pair.truth.count()
              << " px)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Referential fabric defect inspection"};
    app.require_subcommand(1);

    std::string ref, test, truth, config, out, manifest, kind;
    int window = 0;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "Inspect one reference/test pair");
    run->add_option("--ref", ref, "Reference image (PNG/PPM/PGM)")->required();
    run->add_option("--test", test, "Test image")->required();
    run->add_option("--truth", truth, "Ground-truth defect mask");
    run->add_option("--config", config, "key = value configuration file");
    run->add_option("--out", out, "Output directory");
    run->add_option("--window", window, "Tile size")->check(CLI::IsMember({4, 8, 12}));

    auto* batch = app.add_subcommand("batch", "Inspect every pair of a CSV manifest");
    batch->add_option("--manifest", manifest, "reference,test[,truth,label] per line")->required();
    batch->add_option("--config", config, "key = value configuration file");
    batch->add_option("--out", out, "Output directory");
    batch->add_option("--window", window, "Tile size")->check(CLI::IsMember({4, 8, 12}));

    auto* synth = app.add_subcommand("synth", "Write a synthetic reference/test/truth triple");
    synth->add_option("--seed", seed, "Texture and defect seed")->required();
    synth->add_option("--kind", kind, "none|line-break|spot|tear|illumination-gradient+spot")->required();
    synth->add_option("--out", out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (run->parsed()) return cmd_run(ref, test, truth, config, out, window);
        if (batch->parsed()) return cmd_batch(manifest, config, out, window);
        return cmd_synth(seed, kind, out);
    } catch (const UsageError& e) {
        std::cerr << "inspect: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "inspect: " << e.what() << "\n";
        return kFailure;
    }
}
