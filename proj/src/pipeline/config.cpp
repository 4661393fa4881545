#include "fabric/pipeline.hpp"

#include "fabric/codec.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fabric::pipeline {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + what);
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

template <typename T>
std::string format_number(T v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct Field {
    const char* key;
    std::function<bool(PipelineConfig&, const std::string&)> read;
    std::function<std::string(const PipelineConfig&)> write;
};

template <typename T>
Field field(const char* key, T PipelineConfig::*member) {
    return {key, [member](PipelineConfig& c, const std::string& v) { return parse_number(v, c.*member); },
            [member](const PipelineConfig& c) { return format_number(c.*member); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        field("levels", &PipelineConfig::levels),
        field("resize_rows", &PipelineConfig::resize_rows),
        field("resize_cols", &PipelineConfig::resize_cols),
        field("ht_min", &PipelineConfig::ht_min),
        field("ht_max", &PipelineConfig::ht_max),
        field("filter_order", &PipelineConfig::filter_order),
        field("filter_cutoff", &PipelineConfig::filter_cutoff),
        field("filter_length", &PipelineConfig::filter_length),
        field("tile", &PipelineConfig::tile),
        field("stride", &PipelineConfig::stride),
        field("rank_tolerance", &PipelineConfig::rank_tolerance),
        field("theta", &PipelineConfig::theta),
        field("min_defect_pixels", &PipelineConfig::min_defect_pixels),
        field("ransac_seed", &PipelineConfig::ransac_seed),
        field("ransac_iterations", &PipelineConfig::ransac_iterations),
        field("ransac_inlier_radius", &PipelineConfig::ransac_inlier_radius),
        field("workers", &PipelineConfig::workers),
    };
    return f;
}

} // namespace

void validate(const PipelineConfig& c) {
    require(c.levels >= 2 && c.levels <= 65536, "levels must lie in [2, 65536]");
    require(c.resize_rows >= 16 && c.resize_cols >= 16, "resize target must be at least 16x16");
    require(c.ht_min >= 0.0 && c.ht_max <= 1.0, "hysteresis thresholds must lie in [0, 1]");
    require(c.ht_min < c.ht_max, "ht_min must be below ht_max");
    require(c.filter_order >= 1, "filter_order must be >= 1");
    require(c.filter_cutoff > 0.0 && c.filter_cutoff < std::numbers::pi, "filter_cutoff must lie in (0, pi)");
    require(c.filter_length > 2 * c.filter_order, "filter_length must exceed 2 * filter_order");
    require(c.resize_rows <= c.filter_length && c.resize_cols <= c.filter_length,
            "resize target must not exceed filter_length");
    require(c.tile == 4 || c.tile == 8 || c.tile == 12, "tile must be 4, 8 or 12");
    require(c.stride >= 1 && c.stride <= c.tile, "stride must lie in [1, tile]");
    require(c.rank_tolerance > 0.0 && c.rank_tolerance < 1.0, "rank_tolerance must lie in (0, 1)");
    require(c.theta > 0.0 && c.theta <= 1.0, "theta must lie in (0, 1]");
    require(c.min_defect_pixels >= 1, "min_defect_pixels must be >= 1");
    require(c.ransac_iterations >= 1, "ransac_iterations must be >= 1");
    require(c.ransac_inlier_radius > 0.0, "ransac_inlier_radius must be positive");
    require(c.workers >= 1, "workers must be >= 1");
}

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(std::string_view(raw).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = "config line " + std::to_string(line) + ": ";
        if (eq == std::string::npos) throw std::invalid_argument(where + "expected key = value");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        bool known = false;
        for (const Field& f : fields()) {
            if (key != f.key) continue;
            known = true;
            if (!f.read(cfg, value)) throw std::invalid_argument(where + "bad value for " + key + ": '" + value + "'");
        }
        if (!known) throw std::invalid_argument(where + "unknown key '" + key + "'");
    }
    validate(cfg);
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    return parse_config(std::string(bytes.begin(), bytes.end()));
}

std::string format_config(const PipelineConfig& cfg) {
    std::string out;
    for (const Field& f : fields()) out += std::string(f.key) + " = " + f.write(cfg) + "\n";
    return out;
}

int effective_workers(const PipelineConfig& cfg) {
    if (const char* env = std::getenv("INSPECT_WORKERS")) {
        int n = 0;
        if (parse_number(trim(env), n) && n >= 1) return n;
    }
    return cfg.workers;
}

} // namespace fabric::pipeline
