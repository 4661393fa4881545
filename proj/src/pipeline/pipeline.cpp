#include "fabric/pipeline.hpp"

#include "fabric/codec.hpp"
#include "fabric/edge.hpp"
#include "fabric/enhance.hpp"
#include "fabric/subtract.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fabric::pipeline {

namespace {

class StageClock {
public:
    explicit StageClock(StageTimings& out) : out_(out), start_(now()), lap_(start_) {}

    void lap(const char* stage) {
        const auto t = now();
        out_.emplace_back(stage, ms(t - lap_));
        lap_ = t;
    }
    void total() { out_.emplace_back("total", ms(now() - start_)); }

private:
    using clock = std::chrono::steady_clock;
    static clock::time_point now() { return clock::now(); }
    static long long ms(clock::duration d) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(d).count();
    }

    StageTimings& out_;
    clock::time_point start_, lap_;
};

GrayImage prepare(const GrayImage& img, const PipelineConfig& cfg) {
    GrayImage g = resize(img, cfg.resize_rows, cfg.resize_cols);
    if (g.levels() == cfg.levels) return g;
    return GrayImage(g.rows(), g.cols(), std::vector<double>(g.pixels().begin(), g.pixels().end()), cfg.levels);
}

void analyse(const GrayImage& ref_in, const GrayImage& test_in, const PipelineConfig& cfg,
             const std::optional<BinaryMask>& truth, StageClock& clock, PairResult& res) {
    const GrayImage ref = prepare(ref_in, cfg);
    const GrayImage test = prepare(test_in, cfg);
    clock.lap("resize");

    const GrayImage test_hs = enhance::histogram_specification(test, histogram(ref));
    clock.lap("specification");
    const GrayImage ref_e = enhance::mmsiche(ref);
    const GrayImage test_e = enhance::mmsiche(test_hs);
    clock.lap("enhancement");

    registration::RegistrationOptions ropt;
    ropt.ransac.seed = cfg.ransac_seed;
    ropt.ransac.iterations = cfg.ransac_iterations;
    ropt.ransac.inlier_threshold = cfg.ransac_inlier_radius;
    const registration::Registration reg = registration::register_images(ref_e, test_e, ropt);
    res.transform = reg.transform;
    res.inliers = reg.inliers;
    const GrayImage test_ir = registration::warp_image(test_e, reg.transform, ref_e.rows(), ref_e.cols());
    const BinaryMask covered =
        registration::warp_coverage(reg.transform, test_e.rows(), test_e.cols(), ref_e.rows(), ref_e.cols());
    clock.lap("registration");

    subtract::DiffMap ad = subtract::absolute_difference(ref_e, test_ir);
    const auto cov = covered.bits();
    for (std::size_t i = 0; i < ad.values.size(); ++i)
        if (!cov[i]) ad.values[i] = 0.0;
    res.difference_mask =
        subtract::hysteresis(subtract::double_threshold(ad, subtract::ThresholdPair(cfg.ht_min, cfg.ht_max)));
    res.defect_present =
        subtract::defect_present(res.difference_mask, static_cast<std::size_t>(cfg.min_defect_pixels));
    clock.lap("subtraction");

    res.defect_mask = BinaryMask(ref.rows(), ref.cols());
    if (res.defect_present) {
        // Pixels outside the hysteresis mask are not relevant: take them from the reference.
        std::vector<double> composite(ref_e.pixels().begin(), ref_e.pixels().end());
        const auto keep = res.difference_mask.bits();
        const auto moved = test_ir.pixels();
        for (std::size_t i = 0; i < composite.size(); ++i)
            if (keep[i]) composite[i] = moved[i];
        const GrayImage test_c(ref.rows(), ref.cols(), std::move(composite), ref_e.levels());

        const auto filter = edge::ZeroPhaseHighPass::design(cfg.filter_order, cfg.filter_cutoff, cfg.filter_length);
        const edge::EdgeImage ref_edges = edge::extract_edges(ref_e, filter);
        const edge::EdgeImage test_edges = edge::extract_edges(test_c, filter);
        res.edges_computed = true;
        clock.lap("edges");

        sylvester::FaultMapOptions fopt;
        fopt.tile = cfg.tile;
        fopt.stride = cfg.stride;
        fopt.tolerance = cfg.rank_tolerance;
        fopt.workers = cfg.workers;
        res.defect_map = sylvester::fault_map(ref_edges, test_edges, fopt);
        res.defect_mask = res.defect_map->mask(cfg.theta);
        res.detected = res.defect_mask.count() > 0;
        clock.lap("fault_map");
    }

    if (truth) {
        res.gamma = eval::binary_similarity(res.defect_mask, *truth);
        res.coverage = eval::truth_coverage(res.defect_mask, *truth);
    }
}

} // namespace

PairResult inspect_pair(const GrayImage& reference, const GrayImage& test, const PipelineConfig& cfg,
                        const std::optional<BinaryMask>& truth) {
    validate(cfg);
    if (truth && (truth->rows() != cfg.resize_rows || truth->cols() != cfg.resize_cols)) {
        throw std::invalid_argument("inspect_pair: truth mask must match the resize target");
    }
    PairResult res;
    StageClock clock(res.timings_ms);
    analyse(reference, test, cfg, truth, clock, res);
    clock.total();
    return res;
}

PairResult run_pair(const std::filesystem::path& reference, const std::filesystem::path& test,
                    const PipelineConfig& cfg, const std::optional<std::filesystem::path>& truth,
                    const std::optional<std::filesystem::path>& out_dir) {
    validate(cfg);
    PairResult res;
    StageClock clock(res.timings_ms);
    const RgbImage ref_rgb = decode_image(read_file(reference));
    const RgbImage test_rgb = decode_image(read_file(test));
    std::optional<BinaryMask> truth_mask;
    if (truth) {
        truth_mask = load_mask(*truth);
        if (truth_mask->rows() != cfg.resize_rows || truth_mask->cols() != cfg.resize_cols) {
            throw std::invalid_argument("run_pair: truth mask must match the resize target");
        }
    }
    clock.lap("decode");
    const GrayImage ref = to_grayscale(ref_rgb, cfg.levels);
    const GrayImage tst = to_grayscale(test_rgb, cfg.levels);
    clock.lap("grayscale");
    analyse(ref, tst, cfg, truth_mask, clock, res);
    clock.total();

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        save_mask(*out_dir / "mask.png", res.defect_mask);
        const GrayImage intensity = res.defect_map ? res.defect_map->intensity_image()
                                                   : GrayImage(cfg.resize_rows, cfg.resize_cols, 0.0);
        write_file(*out_dir / "intensity.png", encode_png(intensity));
        std::ofstream tiles(*out_dir / "tiles.csv");
        if (res.defect_map) sylvester::write_tiles_csv(tiles, *res.defect_map);
        else tiles << "tile_row,tile_col,rank,intensity\n";
        std::ofstream(*out_dir / "report.json") << pair_report_json(out_dir->filename().string(), &res) << '\n';
    }
    return res;
}

std::string pair_report_json(const std::string& id, const PairResult* r, const std::string& error) {
    nlohmann::ordered_json j;
    j["id"] = id;
    if (!r) {
        j["status"] = "error";
        j["error"] = error;
        return j.dump(2);
    }
    j["status"] = r->status();
    j["defect_present"] = r->defect_present;
    j["detected"] = r->detected;
    j["edges_computed"] = r->edges_computed;
    j["difference_pixels"] = r->difference_mask.count();
    j["defect_pixels"] = r->defect_mask.count();
    if (r->gamma) j["gamma"] = *r->gamma;
    if (r->coverage) j["coverage"] = *r->coverage;
    const auto& t = r->transform;
    j["registration"] = {{"inliers", r->inliers},
                         {"affine", {t.a11, t.a12, t.tx, t.a21, t.a22, t.ty}}};
    j["timings_ms"] = nlohmann::ordered_json::object();
    for (const auto& [stage, ms] : r->timings_ms) j["timings_ms"][stage] = ms;
    return j.dump(2);
}

} // namespace fabric::pipeline
