#pragma once

#include "hwip/experiments.hpp"
#include "hwip/holder.hpp"
#include "hwip/models.hpp"
#include "hwip/norms.hpp"
#include "hwip/renewal.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace hwip {

using Json = nlohmann::ordered_json;

Json to_json(const HolderStatistic& stat);
Json to_json(const WeakLpEstimate& estimate);
Json to_json(const MaxBoundReport& report);
Json to_json(const MwNormReport& report);
Json to_json(const MwSeriesReport& report);
Json to_json(const RenewalChainSpec& spec);
Json to_json(const ProcessModel& model);
Json to_json(const CertificationReport& report);
Json to_json(const Table& table);

/// {kind, p, depth, coefficients, innovation, scale, arch_a, arch_b, start}.
/// Unknown keys and wrong types raise ConfigError naming `where.key`.
ProcessModel model_from_json(const Json& doc, const std::string& where = "model");

/// Two-space indented JSON with a trailing newline; key order is insertion order.
std::string dump(const Json& doc);

/// Header row then one row per entry, doubles at round-trip precision.
std::string to_csv(const Table& table);
/// Columns (n, term, partial_sum, stderr).
std::string to_csv(const MwSeriesReport& report);

std::string partial_sums_csv(const PolygonalPath& path);
/// Single column of partial sums, optional non-numeric header line.
PolygonalPath read_partial_sums_csv(std::istream& in);

std::string format_number(double x);

void write_text_file(const std::filesystem::path& file, std::string_view content);

}  // namespace hwip
