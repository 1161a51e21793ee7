#pragma once

#include "msentropy/experiments.hpp"
#include "msentropy/types.hpp"

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace msentropy {

// ---------------------------------------------------------------------------
// File format shared by records and results: UTF-8 CSV, ',' separator, '\n'
// line endings. Leading lines of the form "# key = value" carry metadata,
// followed by one header row and the data rows. Undefined values are empty
// fields. Floats are written in shortest round-trip form.
// ---------------------------------------------------------------------------

/// Malformed content. Row and column are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0);
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

/// Missing, unreadable, unwritable or empty files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_double(double v);
double parse_double(std::string_view text);

/// Value lists: "a..b" (inclusive integers), "start:step:stop" (inclusive),
/// or comma-separated items of either form and plain numbers.
std::vector<double> parse_values(std::string_view text);
std::vector<int> parse_int_values(std::string_view text);
std::string format_values(const std::vector<double>& values);
std::string format_int_values(const std::vector<int>& values);

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

struct LoadOptions {
    std::vector<std::size_t> columns;      // 0-based, in output order; empty keeps all
    std::optional<std::size_t> max_rows;   // after skipping `offset` rows
    std::size_t offset = 0;                // data rows to skip

    friend bool operator==(const LoadOptions&, const LoadOptions&) = default;
};

/// Reads a record. A "# sample_rate_hz = <hz>" metadata line sets the rate.
MultichannelSeries parse_record(std::istream& in, const LoadOptions& options = {},
                                const std::string& source = "<stream>");
MultichannelSeries load_record(const std::filesystem::path& path, const LoadOptions& options = {});

std::string format_record(const MultichannelSeries& data,
                          const std::vector<std::pair<std::string, std::string>>& metadata = {});
void write_record(const MultichannelSeries& data, const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, std::string>>& metadata = {});

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

struct ResultFile {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::string> get(std::string_view key) const;
    /// Throws ParseError when the key is absent.
    const std::string& require(std::string_view key) const;
    /// Replaces an existing key in place or appends a new one.
    void set(std::string key, std::string value);

    /// Header and rows only, as written to disk.
    std::string data_text() const;

    friend bool operator==(const ResultFile&, const ResultFile&) = default;
};

std::string format_result(const ResultFile& result);
ResultFile parse_result(std::string_view text);
void write_result(const ResultFile& result, const std::filesystem::path& path);
ResultFile read_result(const std::filesystem::path& path);

// Typed views. Each writes "kind" and the rows; callers add the remaining metadata.
ResultFile curve_to_result(const EntropyCurve& curve);
EntropyCurve curve_from_result(const ResultFile& file);

ResultFile ensemble_to_result(const EnsembleResult& result);
EnsembleResult ensemble_from_result(const ResultFile& file);

ResultFile timing_to_result(const TimingReport& report);
TimingReport timing_from_result(const ResultFile& file);

void put_params(ResultFile& file, const EntropyParams& params);
EntropyParams get_params(const ResultFile& file);

}  // namespace msentropy
