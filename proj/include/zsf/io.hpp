#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "zsf/grid.hpp"

namespace zsf {

/// Column-oriented numeric table with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    /// Column by header name; DataError if absent.
    const std::vector<double>& column(const std::string& name) const;
};

/// Renders with 17 significant digits, '\n' line endings.
std::string format_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text, const std::string& source = "<csv>");
CsvTable read_csv(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

/// `x,<value_name>` over the full symmetric grid.
CsvTable potential_table(const SampledPotential& v, const std::string& value_name = "V");
/// Rebuilds the grid from the x column and checks that it is uniform and
/// symmetric. The value column is taken as is (it must already be symmetric
/// to within round-off).
SampledPotential potential_from_table(const CsvTable& table, const std::string& value_name = "V");
SampledPotential read_potential(const std::filesystem::path& path,
                                const std::string& value_name = "V");

}  // namespace zsf
