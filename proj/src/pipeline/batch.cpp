#include "fabric/pipeline.hpp"

#include "fabric/codec.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fabric::pipeline {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::optional<bool> parse_label(const std::string& raw, int line) {
    const std::string v = lower(raw);
    if (v.empty()) return std::nullopt;
    if (v == "1" || v == "true" || v == "defective" || v == "defect") return true;
    if (v == "0" || v == "false" || v == "clean" || v == "defect-free" || v == "none") return false;
    throw std::invalid_argument("manifest line " + std::to_string(line) + ": unrecognized label '" + raw + "'");
}

std::optional<bool> actual_label(const BatchPair& p) {
    if (p.entry.label) return p.entry.label;
    if (p.entry.truth && p.result && p.result->coverage) return true;
    if (p.entry.truth && p.result) return false;
    return std::nullopt;
}

std::string pair_id(std::size_t index, const ManifestEntry& e) {
    std::ostringstream s;
    s << std::setw(4) << std::setfill('0') << index + 1 << '-' << e.test.stem().string();
    return s.str();
}

} // namespace

std::vector<ManifestEntry> parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
    std::vector<ManifestEntry> entries;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool first = true;
    while (std::getline(in, raw)) {
        ++line;
        const std::string body = trim(raw);
        if (body.empty() || body.front() == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(body);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(trim(f));
        if (body.back() == ',') fields.emplace_back();
        if (first && !fields.empty() && lower(fields[0]) == "reference") {
            first = false;
            continue;
        }
        first = false;
        const std::string where = "manifest line " + std::to_string(line) + ": ";
        if (fields.size() < 2 || fields.size() > 4) {
            throw std::invalid_argument(where + "expected reference,test[,truth,label]");
        }
        if (fields[0].empty() || fields[1].empty()) throw std::invalid_argument(where + "empty image path");
        auto resolve = [&](const std::string& p) {
            const std::filesystem::path path(p);
            return path.is_absolute() ? path : base_dir / path;
        };
        ManifestEntry e;
        e.line = line;
        e.reference = resolve(fields[0]);
        e.test = resolve(fields[1]);
        if (fields.size() >= 3 && !fields[2].empty()) e.truth = resolve(fields[2]);
        if (fields.size() == 4) e.label = parse_label(fields[3], line);
        entries.push_back(std::move(e));
    }
    if (entries.empty()) throw std::invalid_argument("manifest: no entries");
    return entries;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    return parse_manifest(std::string(bytes.begin(), bytes.end()), path.parent_path());
}

void aggregate(BatchResult& batch) {
    std::vector<eval::Decision> decisions;
    double gamma_sum = 0.0;
    std::size_t gamma_count = 0;
    long long pair_ms = 0;
    batch.failures = 0;
    for (const BatchPair& p : batch.pairs) {
        if (!p.result) {
            ++batch.failures;
            continue;
        }
        for (const auto& [stage, ms] : p.result->timings_ms)
            if (stage == "total") pair_ms += ms;
        const std::optional<bool> actual = actual_label(p);
        if (!actual) continue;
        decisions.push_back({p.result->detected, *actual});
        if (*actual && p.result->gamma) {
            gamma_sum += *p.result->gamma;
            ++gamma_count;
        }
    }
    batch.report = {};
    if (!decisions.empty()) batch.report.confusion = eval::confusion_metrics(decisions);
    batch.mean_gamma.reset();
    if (gamma_count > 0) batch.mean_gamma = gamma_sum / static_cast<double>(gamma_count);
    batch.report.gamma = batch.mean_gamma;
    batch.report.timings_ms.emplace_back("pairs_total", pair_ms);
}

std::string BatchResult::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(report.to_json());
    j["pair_count"] = pairs.size();
    j["failures"] = failures;
    if (report.confusion) {
        const auto& c = *report.confusion;
        j["counts"] = {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
    }
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const BatchPair& p : pairs) {
        nlohmann::ordered_json e;
        e["id"] = p.id;
        e["line"] = p.entry.line;
        if (!p.result) {
            e["status"] = "error";
            e["error"] = p.error;
        } else {
            e["status"] = p.result->status();
            e["defect_present"] = p.result->defect_present;
            e["detected"] = p.result->detected;
            if (p.result->gamma) e["gamma"] = *p.result->gamma;
            if (p.result->coverage) e["coverage"] = *p.result->coverage;
        }
        if (const auto a = actual_label(p)) e["actual"] = *a;
        list.push_back(std::move(e));
    }
    j["pairs"] = std::move(list);
    return j.dump(2);
}

BatchResult run_batch(const std::vector<ManifestEntry>& entries, const PipelineConfig& cfg,
                      const std::optional<std::filesystem::path>& out_dir) {
    validate(cfg);
    if (entries.empty()) throw std::invalid_argument("run_batch: no entries");
    const auto start = std::chrono::steady_clock::now();

    BatchResult batch;
    batch.pairs.resize(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        batch.pairs[i].entry = entries[i];
        batch.pairs[i].id = pair_id(i, entries[i]);
    }

    const int workers = std::min<int>(effective_workers(cfg), static_cast<int>(entries.size()));
    PipelineConfig inner = cfg;
    inner.workers = workers > 1 ? 1 : effective_workers(cfg);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < batch.pairs.size(); i = next++) {
            BatchPair& p = batch.pairs[i];
            std::optional<std::filesystem::path> dir;
            if (out_dir) dir = *out_dir / p.id;
            try {
                p.result = run_pair(p.entry.reference, p.entry.test, inner, p.entry.truth, dir);
            } catch (const std::exception& ex) {
                p.error = ex.what();
                if (dir) {
                    std::filesystem::create_directories(*dir);
                    std::ofstream(*dir / "report.json") << pair_report_json(p.id, nullptr, p.error) << '\n';
                }
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    }

    aggregate(batch);
    batch.report.timings_ms.emplace_back(
        "wall", std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                    .count());
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::ofstream(*out_dir / "batch.json") << batch.to_json() << '\n';
    }
    return batch;
}

} // namespace fabric::pipeline
