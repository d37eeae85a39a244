#pragma once

// Flat-file outputs: CSV (header row, snake_case columns, reals with 17
// significant digits) and JSON documents {"metadata": ..., "records": [...]}.
// Files are written to a temporary sibling and renamed into place.

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "epenc/complextime.hpp"
#include "epenc/propagator.hpp"
#include "epenc/sweep.hpp"

namespace epenc::io {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// %.17g, with "nan", "inf" and "-inf" for non-finite values.
[[nodiscard]] std::string format_real(double v);

[[nodiscard]] std::string to_csv(const Table& t);
/// Records as an array of objects; non-finite reals become null.
[[nodiscard]] nlohmann::json to_json_records(const Table& t);
[[nodiscard]] std::string to_json_document(const Table& t, const nlohmann::json& metadata);

/// Writes content to path via a temporary file in the same directory and an
/// atomic rename. Throws InputError when the directory is missing and
/// std::runtime_error on other I/O failures.
void write_atomic(const std::filesystem::path& path, const std::string& content);

enum class Format { Csv, Json };

[[nodiscard]] Format parse_format(const std::string& s);

/// Serializes the table in the requested format. For CSV the metadata goes to
/// a sidecar "<path>.meta.json"; for JSON it is embedded.
void write_table(const std::filesystem::path& path, const Table& t, const nlohmann::json& metadata, Format f);

[[nodiscard]] nlohmann::json system_json(const SystemParams& sys);
[[nodiscard]] nlohmann::json ode_json(const OdeOptions& o);

// Table builders for each output kind.
[[nodiscard]] Table sweep_table(const SweepResult& r);
[[nodiscard]] nlohmann::json sweep_metadata(const SweepResult& r);
[[nodiscard]] Table trajectory_table(const std::vector<TrajectorySample>& traj);
[[nodiscard]] Table dyn_eps_table(const std::vector<DynamicalEP>& eps);
[[nodiscard]] Table separatrix_table(const std::vector<SeparatrixPoint>& pts);
[[nodiscard]] Table contour_table(const ContourTable& c);

/// |eps_minus - eps_plus| / Omega_s on a rectangular grid of complex x = t/tau.
[[nodiscard]] Table split_field_table(const ContourShape& shape, const SearchRegion& region, int nx, int ny);

/// Minimal CSV reader for files written by to_csv (no quoting).
struct CsvData {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] int column(const std::string& name) const;
};
[[nodiscard]] CsvData parse_csv(const std::string& text);

}  // namespace epenc::io
