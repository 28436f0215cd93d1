#ifndef TORUSFLUX_REPORTS_HPP
#define TORUSFLUX_REPORTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "torusflux/fields.hpp"
#include "torusflux/flux.hpp"
#include "torusflux/mollify.hpp"
#include "torusflux/norms.hpp"

namespace torusflux {

inline constexpr const char* kToolVersion = "0.1.0";

// stable 64-bit FNV-1a over the canonical (sorted-key) JSON dump
std::uint64_t fnv1a64(const std::string& data);
std::string config_hash(const nlohmann::json& config);

// every emitted payload carries {tool_version, config_hash, seed}
nlohmann::json report_header(const nlohmann::json& config, std::uint64_t seed);

nlohmann::json to_json(const BesovSpec& spec);
nlohmann::json to_json(const BesovReport& report);
nlohmann::json to_json(const GeneratorCertificate& cert);
nlohmann::json to_json(const FluxSeries& series);
nlohmann::json to_json(const MollificationRates& rates);

// CSV with a mandatory header row, '.' decimal point, byte-stable ordering
std::string csv_dj_rows(const BesovReport& report);
std::string csv_scan_rows(std::span<const double> index, std::span<const double> values,
                          const std::string& index_name);

std::string format_double(double v); // shortest round-trip decimal form

void write_text(const std::string& path, const std::string& content);

} // namespace torusflux

#endif
