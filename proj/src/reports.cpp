#include "torusflux/reports.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace torusflux {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string config_hash(const nlohmann::json& config) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config.dump())));
    return std::string(buf);
}

nlohmann::json report_header(const nlohmann::json& config, std::uint64_t seed) {
    return nlohmann::json{{"tool_version", kToolVersion},
                          {"config_hash", config_hash(config)},
                          {"seed", seed}};
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

nlohmann::json to_json(const BesovSpec& spec) {
    nlohmann::json j;
    j["s"] = spec.s;
    j["p"] = std::isinf(spec.p) ? nlohmann::json("inf") : nlohmann::json(spec.p);
    switch (spec.qkind) {
        case QKind::Value:
            j["q"] = std::isinf(spec.q) ? nlohmann::json("inf") : nlohmann::json(spec.q);
            break;
        case QKind::CNat: j["q"] = "c(N)"; break;
        case QKind::Vmo: j["q"] = "VMO"; break;
    }
    return j;
}

nlohmann::json to_json(const BesovReport& report) {
    nlohmann::json j;
    j["spec"] = to_json(report.spec);
    j["d_j"] = report.dj;
    j["j_min"] = -1;
    j["norm"] = report.norm;
    j["hom_norm"] = report.hom_norm;
    j["lp_part"] = report.lp_part;
    j["equiv_norm"] = report.equiv_norm;
    j["tail_sup"] = report.tail_sup;
    return j;
}

nlohmann::json to_json(const GeneratorCertificate& cert) {
    nlohmann::json j;
    j["kind"] = cert.kind;
    j["seed"] = cert.seed;
    j["rng"] = "splitmix64";
    j["planted_alpha"] = cert.planted_alpha;
    j["planted_p"] = cert.planted_p;
    j["planted_dj"] = cert.planted_dj;
    j["measured_dj"] = cert.measured_dj;
    j["params"] = cert.params;
    return j;
}

nlohmann::json to_json(const FluxSeries& series) {
    nlohmann::json j;
    j["kind"] = series.kind;
    j["index"] = series.index;
    j["values"] = series.values;
    j["slope"] = series.slope;
    // sign conventions, fixed for all emitted series
    j["sign_convention"] = series.kind.find("energy") == 0
                               ? "positive = energy leaving the resolved scales"
                               : "value = d/dt of the filtered helicity";
    return j;
}

nlohmann::json to_json(const MollificationRates& rates) {
    nlohmann::json j;
    j["eps"] = rates.eps;
    j["diff_lq"] = rates.diff_lq;
    j["grad_lq"] = rates.grad_lq;
    j["diff_slope"] = rates.diff_slope;
    j["grad_slope"] = rates.grad_slope;
    return j;
}

std::string csv_dj_rows(const BesovReport& report) {
    std::string out = "j,d_j\n";
    for (std::size_t i = 0; i < report.dj.size(); ++i) {
        out += std::to_string(static_cast<int>(i) - 1);
        out += ',';
        out += format_double(report.dj[i]);
        out += '\n';
    }
    return out;
}

std::string csv_scan_rows(std::span<const double> index, std::span<const double> values,
                          const std::string& index_name) {
    std::string out = index_name + ",value\n";
    for (std::size_t i = 0; i < index.size(); ++i) {
        out += format_double(index[i]);
        out += ',';
        out += format_double(values[i]);
        out += '\n';
    }
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write failed: " + path);
}

} // namespace torusflux
