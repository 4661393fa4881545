#include "fabric/eval.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace fabric::eval {

double binary_similarity(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("binary_similarity: masks differ in size");
    const auto x = a.bits(), y = b.bits();
    std::size_t differing = 0;
    for (std::size_t i = 0; i < x.size(); ++i) differing += (x[i] != 0) != (y[i] != 0);
    const double pq = static_cast<double>(a.size());
    return std::fabs(1.0 - 2.0 * static_cast<double>(differing) / pq);
}

std::optional<double> truth_coverage(const BinaryMask& detected, const BinaryMask& truth) {
    if (!detected.same_shape(truth)) throw std::invalid_argument("truth_coverage: masks differ in size");
    const auto d = detected.bits(), t = truth.bits();
    std::size_t area = 0, hit = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!t[i]) continue;
        ++area;
        hit += d[i] != 0;
    }
    if (area == 0) return std::nullopt;
    return static_cast<double>(hit) / static_cast<double>(area);
}

ConfusionMetrics confusion_metrics(const std::vector<Decision>& decisions) {
    if (decisions.empty()) throw std::invalid_argument("confusion_metrics: no decisions");
    ConfusionMetrics m;
    for (const Decision& d : decisions) {
        if (d.predicted && d.actual) ++m.tp;
        else if (d.predicted) ++m.fp;
        else if (d.actual) ++m.fn;
        else ++m.tn;
    }
    auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(decisions.size());
    m.precision = ratio(m.tp, m.tp + m.fp);
    m.recall = ratio(m.tp, m.tp + m.fn);
    m.fp_rate = ratio(m.fp, m.fp + m.tn);
    m.fn_rate = ratio(m.fn, m.fn + m.tp);
    return m;
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    if (gamma) j["gamma"] = *gamma;
    if (confusion) {
        const ConfusionMetrics& c = *confusion;
        j["accuracy"] = c.accuracy;
        if (c.precision) j["precision"] = *c.precision;
        if (c.recall) j["recall"] = *c.recall;
        if (c.fp_rate) j["fp_rate"] = *c.fp_rate;
        if (c.fn_rate) j["fn_rate"] = *c.fn_rate;
    }
    j["timings_ms"] = nlohmann::ordered_json::object();
    for (const auto& [stage, ms] : timings_ms) j["timings_ms"][stage] = ms;
    return j.dump(2);
}

} // namespace fabric::eval
