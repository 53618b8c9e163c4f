#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "clsel/dataset.hpp"

namespace clsel::io {

inline constexpr std::int8_t kMissing = -1;

// Genotype table: cells in {0, 1, 2} or kMissing, plus a 0/1 response.
struct RawTable {
    std::vector<std::string> names;          // explanatory columns, file order
    std::vector<std::vector<std::int8_t>> columns;  // columns[j][i]
    std::vector<double> response;            // length n
    std::string response_name;

    std::size_t n() const { return response.size(); }
    std::size_t p() const { return columns.size(); }
    std::size_t missing_count() const;
};

// Response column given by header name or by 1-based position.
using ColumnRef = std::variant<std::string, std::size_t>;

// Delimiter-separated values, comma or tab (chosen from the header line).
// "NA" and empty cells are missing. Lines starting with '#' are skipped.
// Errors carry line and column.
RawTable load_table(std::istream& in, const ColumnRef& response_column);
RawTable load_table(const std::string& path, const ColumnRef& response_column);

struct ImputationReport {
    std::size_t imputed_cells = 0;
    std::vector<std::size_t> imputed_per_column;
};

// Each missing cell drawn from the empirical distribution of the observed
// cells of its column. Throws InvalidDataset for a fully missing column.
RawTable impute(const RawTable& table, std::uint64_t seed, ImputationReport* report = nullptr);

struct DropReport {
    std::vector<std::size_t> dropped;  // original 0-based column positions
    std::vector<std::string> dropped_names;
};

// Removes all-zero columns, or every zero-variance column when
// drop_zero_variance is set.
RawTable drop_uninformative(const RawTable& table, bool drop_zero_variance = false,
                            DropReport* report = nullptr);

// Requires a table without missing cells.
Dataset to_dataset(const RawTable& table);

// Comma-separated table with header, response column last.
void write_table(std::ostream& out, const Dataset& dataset, const std::string& response_name = "y");

struct Rgb {
    std::uint8_t r, g, b;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

// 0 -> green, 1 -> white, 2 -> pink.
Rgb genotype_colour(int code);

enum class PixmapFormat { binary_p6, ascii_p3 };

// One pixel row per observation (cases first, then controls, each in
// input order) and one pixel column per selected variable. Comment lines
// are written after the magic number.
void raster_export(std::ostream& out, const Dataset& dataset,
                   const std::vector<std::size_t>& selected,
                   PixmapFormat format = PixmapFormat::binary_p6,
                   const std::vector<std::string>& comments = {});
void raster_export(const std::string& path, const Dataset& dataset,
                   const std::vector<std::size_t>& selected,
                   PixmapFormat format = PixmapFormat::binary_p6,
                   const std::vector<std::string>& comments = {});

}  // namespace clsel::io
