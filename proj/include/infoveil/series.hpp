#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "infoveil/date.hpp"

namespace infoveil {

/// Daily values over a contiguous date range: index i holds the value for
/// start_date + i days. Immutable after construction.
struct DailySeries {
    Date start_date;
    std::vector<double> values;
    std::string label;

    DailySeries(Date start, std::vector<double> vals, std::string lbl);

    std::size_t size() const noexcept { return values.size(); }
    Date date_at(std::size_t i) const { return start_date + static_cast<std::int64_t>(i); }
    /// Date of the last value.
    Date end_date() const { return start_date + static_cast<std::int64_t>(values.size()) - 1; }
    bool contains(Date d) const { return d >= start_date && d <= end_date(); }
    double value_on(Date d) const;
};

/// First differences of a DailySeries. start_date is the date of the first
/// difference, i.e. day 2 of the source series.
struct DiffSeries {
    Date start_date;
    std::vector<double> values;
    std::string source_label;

    DiffSeries(Date start, std::vector<double> vals, std::string lbl);

    std::size_t size() const noexcept { return values.size(); }
    Date date_at(std::size_t i) const { return start_date + static_cast<std::int64_t>(i); }
    Date end_date() const { return start_date + static_cast<std::int64_t>(values.size()) - 1; }
    bool contains(Date d) const { return d >= start_date && d <= end_date(); }
    double value_on(Date d) const;
};

/// out[i] = in[i+1] - in[i]; requires length >= 2.
DiffSeries difference(const DailySeries& series);

/// Rebuilds levels from a first value and its differences.
DailySeries undifference(double first_value, const DiffSeries& diffs, std::string label);

/// counts[i] / totals[i] * 1e6; ranges must match and totals must be > 0.
DailySeries normalize_per_million(const DailySeries& counts, const DailySeries& totals);

/// Restricts both series to the intersection of their date ranges.
std::pair<DailySeries, DailySeries> align(const DailySeries& a, const DailySeries& b);

/// Shifts a difference series forward by k days: the output value on date d
/// equals the input value on date d - k. Requires 1 <= k < length.
DiffSeries lag(const DiffSeries& series, int k);

} // namespace infoveil
