#include "infoveil/granger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infoveil/stats.hpp"

namespace infoveil {

namespace {

void validate_spec(const GrangerSpec& spec) {
    if (spec.max_lag < 1 || spec.max_lag > 29)
        raise(ErrorKind::InvalidInput,
              "max_lag must be in [1, 29], got " + std::to_string(spec.max_lag));
    if (spec.intervention && spec.intervention->decay_days < 1)
        raise(ErrorKind::InvalidInput, "decay_days must be >= 1");
    if (spec.ci_level <= 0.0 || spec.ci_level >= 1.0)
        raise(ErrorKind::InvalidInput, "ci_level must be in (0, 1)");
}

// Case-lag values before the series start are structural zeros.
double case_lag_value(const DiffSeries& cases, Date d) {
    return d < cases.start_date ? 0.0 : cases.value_on(d);
}

DesignBundle build_design_rows(const DiffSeries& cases, const DiffSeries& predictor,
                               const GrangerSpec& spec, Date row_start, Date row_end) {
    const int m = spec.max_lag;
    const auto n = static_cast<std::size_t>(row_end - row_start) + 1;

    DesignBundle bundle{DesignMatrix::create(n), std::vector<double>(n), {}};
    bundle.dates.reserve(n);
    for (Date t = row_start; t <= row_end; ++t) {
        bundle.dates.push_back(t);
        bundle.y[static_cast<std::size_t>(t - row_start)] = cases.value_on(t);
    }

    std::vector<double> col(n);
    for (int i = 1; i <= m; ++i) {
        for (std::size_t r = 0; r < n; ++r)
            col[r] = case_lag_value(cases, bundle.dates[r] - i);
        bundle.X.add_column("cases_lag" + std::to_string(i), col);
    }
    for (int j = 1; j <= m; ++j) {
        for (std::size_t r = 0; r < n; ++r)
            col[r] = predictor.value_on(bundle.dates[r] - j);
        bundle.X.add_column(spec.predictor_label + "_lag" + std::to_string(j), col);
    }
    if (spec.intervention) {
        const DailySeries pulse = intervention_indicator(*spec.intervention, row_start, row_end);
        bundle.X.add_column("intervention", pulse.values);
    }
    return bundle;
}

// Usable rows: the response needs dC_t, predictor lags need m days of
// genuine history, and case lags before the series start count as zero.
std::pair<Date, Date> natural_rows(const DiffSeries& cases, const DiffSeries& predictor, int m) {
    const Date row_start = std::max(cases.start_date, predictor.start_date + m);
    const Date row_end = std::min(cases.end_date(), predictor.end_date() + 1);
    if (row_start > row_end)
        raise(ErrorKind::Coverage,
              "predictor '" + predictor.source_label + "' must start on or before " +
                  (row_end - m).to_string() + " to supply " + std::to_string(m) +
                  " lags for any case date (starts " + predictor.start_date.to_string() + ")");
    return {row_start, row_end};
}

RegressionFit fit_baseline(const DesignBundle& bundle, const GrangerSpec& spec) {
    const int m = spec.max_lag;
    DesignMatrix X = DesignMatrix::create(bundle.y.size());
    std::vector<double> col(bundle.y.size());
    for (int i = 1; i <= m; ++i) {
        const std::size_t j = 1 + static_cast<std::size_t>(i - 1);
        std::copy(bundle.X.col(j), bundle.X.col(j) + bundle.X.n, col.begin());
        X.add_column(bundle.X.names[j], col);
    }
    if (spec.intervention) {
        const std::size_t j = bundle.X.cols() - 1;
        std::copy(bundle.X.col(j), bundle.X.col(j) + bundle.X.n, col.begin());
        X.add_column("intervention", col);
    }
    return ols_fit(X, bundle.y, spec.flavor);
}

} // namespace

DailySeries intervention_indicator(const InterventionSpec& spec, Date range_start, Date range_end) {
    if (spec.decay_days < 1)
        raise(ErrorKind::InvalidInput, "decay_days must be >= 1");
    if (range_end < range_start)
        raise(ErrorKind::InvalidInput, "intervention range is empty");
    if (spec.date < range_start || spec.date > range_end)
        raise(ErrorKind::Domain, "intervention date " + spec.date.to_string() +
                                     " outside range [" + range_start.to_string() + ", " +
                                     range_end.to_string() + "]");
    std::vector<double> values(static_cast<std::size_t>(range_end - range_start) + 1, 0.0);
    const int d = spec.decay_days;
    for (int i = 0; i < d; ++i) {
        const Date day = spec.date + i;
        if (day > range_end) break;
        values[static_cast<std::size_t>(day - range_start)] =
            static_cast<double>(d - i) / static_cast<double>(d);
    }
    return DailySeries(range_start, std::move(values), "intervention");
}

DesignBundle build_design(const DiffSeries& cases, const DiffSeries& predictor,
                          const GrangerSpec& spec) {
    validate_spec(spec);
    const auto [row_start, row_end] = natural_rows(cases, predictor, spec.max_lag);
    return build_design_rows(cases, predictor, spec, row_start, row_end);
}

GrangerReport fit_granger(const DiffSeries& cases, const DiffSeries& predictor,
                          const GrangerSpec& spec) {
    DesignBundle bundle = build_design(cases, predictor, spec);

    GrangerReport report;
    report.spec = spec;
    report.first_row_date = bundle.dates.front();
    report.last_row_date = bundle.dates.back();
    report.fit = ols_fit(bundle.X, bundle.y, spec.flavor);
    report.baseline_fit = fit_baseline(bundle, spec);
    report.delta_adj_r2 = report.fit.adj_r2 - report.baseline_fit.adj_r2;

    const int m = spec.max_lag;
    const double sd_y = [&] {
        double mean = 0.0;
        for (double v : bundle.y) mean += v;
        mean /= static_cast<double>(bundle.y.size());
        double ss = 0.0;
        for (double v : bundle.y) ss += (v - mean) * (v - mean);
        return std::sqrt(ss / static_cast<double>(bundle.y.size() - 1));
    }();
    const double df = static_cast<double>(report.fit.residual_df);
    const double tq = student_t_quantile(0.5 * (1.0 + spec.ci_level), df);

    report.effects.reserve(m);
    for (int j = 1; j <= m; ++j) {
        const std::size_t col = 1 + static_cast<std::size_t>(m) + static_cast<std::size_t>(j - 1);
        LagEffect e;
        e.lag = j;
        e.coefficient = report.fit.coefficients[col];
        e.se = report.fit.robust_se(col);

        double col_mean = 0.0;
        const double* x = bundle.X.col(col);
        for (std::size_t i = 0; i < bundle.X.n; ++i) col_mean += x[i];
        col_mean /= static_cast<double>(bundle.X.n);
        double ss = 0.0;
        for (std::size_t i = 0; i < bundle.X.n; ++i) ss += (x[i] - col_mean) * (x[i] - col_mean);
        const double sd_x = std::sqrt(ss / static_cast<double>(bundle.X.n - 1));
        const double scale = sd_y > 0.0 ? sd_x / sd_y : 0.0;

        e.std_coefficient = e.coefficient * scale;
        e.ci_lo = (e.coefficient - tq * e.se) * scale;
        e.ci_hi = (e.coefficient + tq * e.se) * scale;
        if (e.se > 0.0)
            e.p_value = student_t_pvalue(e.coefficient / e.se, df);
        else
            e.p_value = e.coefficient == 0.0 ? 1.0 : 0.0;
        report.effects.push_back(e);
    }

    const double rss_f = report.fit.rss;
    const double rss_b = report.baseline_fit.rss;
    report.predictor_block.df1 = static_cast<std::size_t>(m);
    report.predictor_block.df2 = report.fit.residual_df;
    if (rss_f > 0.0) {
        report.predictor_block.f_stat =
            ((rss_b - rss_f) / static_cast<double>(m)) / (rss_f / df);
        report.predictor_block.p_value =
            f_survival(report.predictor_block.f_stat, static_cast<double>(m), df);
    } else {
        report.predictor_block.f_stat = std::numeric_limits<double>::infinity();
        report.predictor_block.p_value = 0.0;
    }
    return report;
}

LagScanResult scan_lags(const DiffSeries& cases, const DiffSeries& predictor,
                        const GrangerSpec& base_spec, int m_lo, int m_hi, double threshold) {
    if (m_lo > m_hi)
        raise(ErrorKind::InvalidInput, "lag scan range is empty");
    if (m_lo < 1 || m_hi > 29)
        raise(ErrorKind::InvalidInput, "lag scan range must lie within [1, 29]");

    GrangerSpec probe = base_spec;
    probe.max_lag = m_hi;
    validate_spec(probe);
    const auto [row_start, row_end] = natural_rows(cases, predictor, m_hi);

    LagScanResult result;
    result.threshold = threshold;
    double prev_adj = 0.0;
    for (int m = m_lo; m <= m_hi; ++m) {
        GrangerSpec spec = base_spec;
        spec.max_lag = m;
        DesignBundle bundle = build_design_rows(cases, predictor, spec, row_start, row_end);
        const RegressionFit fit = ols_fit(bundle.X, bundle.y, spec.flavor);
        LagScanRow row;
        row.m = m;
        row.r2 = fit.r2;
        row.adj_r2 = fit.adj_r2;
        row.delta_adj_r2 = result.rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                               : fit.adj_r2 - prev_adj;
        row.aic = fit.aic;
        row.bic = fit.bic;
        row.model_df = fit.k - 1;
        prev_adj = fit.adj_r2;
        result.rows.push_back(row);
    }

    result.recommended = m_hi;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        bool settled = true;
        for (std::size_t j = i + 1; j < result.rows.size(); ++j)
            if (!(result.rows[j].delta_adj_r2 < threshold)) { settled = false; break; }
        if (settled) { result.recommended = result.rows[i].m; break; }
    }
    return result;
}

DecayScanResult compare_decays(const DiffSeries& cases, const DiffSeries& predictor,
                               const GrangerSpec& spec, const std::vector<int>& decay_days) {
    if (!spec.intervention)
        raise(ErrorKind::InvalidInput, "compare_decays requires an intervention in the spec");
    if (decay_days.empty())
        raise(ErrorKind::InvalidInput, "compare_decays requires at least one decay coding");

    DecayScanResult result;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int d : decay_days) {
        GrangerSpec s = spec;
        s.intervention->decay_days = d;
        const GrangerReport report = fit_granger(cases, predictor, s);
        DecayRow row{d, report.fit.adj_r2, report.fit.aic, report.fit.bic};
        result.rows.push_back(row);
        if (row.aic < best_aic) {
            best_aic = row.aic;
            result.best_decay = d;
        }
    }
    return result;
}

std::vector<std::pair<std::string, GrangerReport>> region_split_analysis(
    const std::vector<std::pair<std::string, RegionData>>& regions, const GrangerSpec& spec,
    const std::optional<std::set<std::string>>& intervention_regions) {
    std::vector<std::pair<std::string, GrangerReport>> out;
    std::vector<const std::pair<std::string, RegionData>*> ordered;
    ordered.reserve(regions.size());
    for (const auto& r : regions) ordered.push_back(&r);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto* a, const auto* b) { return a->first < b->first; });

    for (const auto* r : ordered) {
        GrangerSpec s = spec;
        if (intervention_regions && !intervention_regions->count(r->first))
            s.intervention.reset();
        out.emplace_back(r->first, fit_granger(r->second.cases, r->second.predictor, s));
    }
    return out;
}

} // namespace infoveil
