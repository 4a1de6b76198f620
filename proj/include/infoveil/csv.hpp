#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "infoveil/series.hpp"

namespace infoveil {

/// Incremental CSV record reader with standard double-quote escaping.
/// Quoted fields may contain commas, quotes ("" escape) and newlines.
/// Tracks line numbers for error reporting; tolerates CRLF endings.
class CsvReader {
public:
    CsvReader(std::istream& in, std::string source_name);

    /// Reads the next record. Returns false at end of input. Skips fully
    /// blank lines. Throws Parse errors with file and line context.
    bool next(std::vector<std::string>& fields);

    /// Line number on which the most recent record started (1-based).
    long record_line() const noexcept { return record_line_; }
    const std::string& source() const noexcept { return source_; }

    [[noreturn]] void fail(const std::string& message) const;

private:
    std::istream& in_;
    std::string source_;
    long line_ = 0;
    long record_line_ = 0;
};

/// Splits one raw CSV line without quote processing (writer-side helper and
/// simple headers).
std::vector<std::string> split_unquoted(const std::string& line, char sep = ',');

/// Formats a double with 9 significant digits, '.' decimal separator.
std::string format_value(double v);

/// Quotes a field for CSV output when it contains separators, quotes or
/// newlines.
std::string csv_quote(const std::string& field);

/// Writes `content` to `path` atomically (temp file + rename).
void atomic_write_file(const std::string& path, const std::string& content);

/// Reads a `date,value` CSV into a DailySeries. Dates must be strictly
/// ascending; interior gaps are an error unless `fill_zero` is set, in which
/// case missing days become 0. When `column` is given the file may carry
/// several value columns (`date,<c1>,<c2>,...`) and that column is selected.
DailySeries read_series_csv(const std::string& path, const std::string& label,
                            bool fill_zero = false,
                            const std::optional<std::string>& column = std::nullopt);

/// Writes a DailySeries as `date,value` rows.
void write_series_csv(const std::string& path, const DailySeries& series);

/// Parses a double, rejecting non-numeric and non-finite content.
double parse_value(const std::string& text, const std::function<void(const std::string&)>& onerror);

} // namespace infoveil
