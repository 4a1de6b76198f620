#include "infoveil/series.hpp"

#include <cmath>

namespace infoveil {

namespace {

void check_finite(const std::vector<double>& vals, const std::string& label) {
    for (double v : vals)
        if (!std::isfinite(v))
            raise(ErrorKind::InvalidInput, "non-finite value in series '" + label + "'");
}

} // namespace

DailySeries::DailySeries(Date start, std::vector<double> vals, std::string lbl)
    : start_date(start), values(std::move(vals)), label(std::move(lbl)) {
    if (values.empty())
        raise(ErrorKind::InvalidInput, "series '" + label + "' must be non-empty");
    check_finite(values, label);
}

double DailySeries::value_on(Date d) const {
    if (!contains(d))
        raise(ErrorKind::InvalidInput,
              "date " + d.to_string() + " outside series '" + label + "'");
    return values[static_cast<std::size_t>(d - start_date)];
}

DiffSeries::DiffSeries(Date start, std::vector<double> vals, std::string lbl)
    : start_date(start), values(std::move(vals)), source_label(std::move(lbl)) {
    if (values.empty())
        raise(ErrorKind::InvalidInput, "difference series '" + source_label + "' must be non-empty");
    check_finite(values, source_label);
}

double DiffSeries::value_on(Date d) const {
    if (!contains(d))
        raise(ErrorKind::InvalidInput,
              "date " + d.to_string() + " outside difference series '" + source_label + "'");
    return values[static_cast<std::size_t>(d - start_date)];
}

DiffSeries difference(const DailySeries& series) {
    if (series.size() < 2)
        raise(ErrorKind::InvalidInput,
              "cannot difference series '" + series.label + "' of length " +
                  std::to_string(series.size()));
    std::vector<double> out(series.size() - 1);
    for (std::size_t i = 0; i + 1 < series.size(); ++i)
        out[i] = series.values[i + 1] - series.values[i];
    return DiffSeries(series.start_date + 1, std::move(out), series.label);
}

DailySeries undifference(double first_value, const DiffSeries& diffs, std::string label) {
    std::vector<double> out;
    out.reserve(diffs.size() + 1);
    out.push_back(first_value);
    for (double d : diffs.values) out.push_back(out.back() + d);
    return DailySeries(diffs.start_date - 1, std::move(out), std::move(label));
}

DailySeries normalize_per_million(const DailySeries& counts, const DailySeries& totals) {
    if (counts.start_date != totals.start_date || counts.size() != totals.size())
        raise(ErrorKind::Alignment,
              "normalize: '" + counts.label + "' and '" + totals.label +
                  "' cover different date ranges");
    std::vector<double> out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (totals.values[i] <= 0.0)
            raise(ErrorKind::Domain, "normalize: total on " + counts.date_at(i).to_string() +
                                         " is not strictly positive");
        out[i] = counts.values[i] / totals.values[i] * 1e6;
    }
    return DailySeries(counts.start_date, std::move(out), counts.label + "_per_million");
}

std::pair<DailySeries, DailySeries> align(const DailySeries& a, const DailySeries& b) {
    const Date lo = std::max(a.start_date, b.start_date);
    const Date hi = std::min(a.end_date(), b.end_date());
    if (lo > hi)
        raise(ErrorKind::Alignment, "align: '" + a.label + "' [" + a.start_date.to_string() + ".." +
                                        a.end_date().to_string() + "] and '" + b.label + "' [" +
                                        b.start_date.to_string() + ".." + b.end_date().to_string() +
                                        "] do not overlap");
    auto slice = [&](const DailySeries& s) {
        const auto off = static_cast<std::size_t>(lo - s.start_date);
        const auto len = static_cast<std::size_t>(hi - lo) + 1;
        std::vector<double> v(s.values.begin() + off, s.values.begin() + off + len);
        return DailySeries(lo, std::move(v), s.label);
    };
    return {slice(a), slice(b)};
}

DiffSeries lag(const DiffSeries& series, int k) {
    if (k < 1)
        raise(ErrorKind::InvalidInput, "lag order must be >= 1, got " + std::to_string(k));
    if (static_cast<std::size_t>(k) >= series.size())
        raise(ErrorKind::InvalidInput, "lag order " + std::to_string(k) +
                                           " >= series length " + std::to_string(series.size()));
    std::vector<double> out(series.values.begin(), series.values.end() - k);
    return DiffSeries(series.start_date + k, std::move(out), series.source_label);
}

} // namespace infoveil
