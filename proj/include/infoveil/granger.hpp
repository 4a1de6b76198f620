#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "infoveil/econ.hpp"
#include "infoveil/series.hpp"

namespace infoveil {

/// One-off exogenous shock: value 1 on `date`, linearly decaying to zero
/// over `decay_days` days (1 = instant pulse).
struct InterventionSpec {
    Date date;
    int decay_days = 1;
};

struct GrangerSpec {
    int max_lag = 1;  // m, in [1, 29]
    std::optional<InterventionSpec> intervention;
    std::string predictor_label = "signal";
    RobustFlavor flavor = RobustFlavor::HC1;
    double ci_level = 0.95;
};

/// Per-lag predictor effect. Confidence bounds are on the standardized
/// scale (the plotting scale); `se` is the robust standard error of the raw
/// coefficient.
struct LagEffect {
    int lag = 0;
    double coefficient = 0.0;
    double std_coefficient = 0.0;
    double se = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double p_value = 1.0;
};

/// Classical nested-model F test on the predictor-lag block.
struct BlockTest {
    double f_stat = 0.0;
    double p_value = 1.0;
    std::size_t df1 = 0;
    std::size_t df2 = 0;
};

struct GrangerReport {
    GrangerSpec spec;
    RegressionFit fit;
    RegressionFit baseline_fit;  // same rows, predictor lags removed
    std::vector<LagEffect> effects;
    double delta_adj_r2 = 0.0;
    BlockTest predictor_block;
    Date first_row_date;
    Date last_row_date;
};

/// Pulse indicator over [range_start, range_end]; decay steps that fall
/// past the end of the range are dropped.
DailySeries intervention_indicator(const InterventionSpec& spec, Date range_start, Date range_end);

struct DesignBundle {
    DesignMatrix X;
    std::vector<double> y;
    std::vector<Date> dates;
};

/// Lays out the lagged regression
///   dC_t = a0 + sum_i a_i dC_{t-i} + sum_j b_j dS_{t-j} + c1 I_t + e_t
/// with one row per date from cases.start_date through
/// min(cases.end, predictor.end + 1). Case-lag values at dates before the
/// cases series begin are structurally zero (no cases before the first
/// observation); the predictor must genuinely cover every lagged date, which
/// is what the start-date precondition enforces.
DesignBundle build_design(const DiffSeries& cases, const DiffSeries& predictor,
                          const GrangerSpec& spec);

GrangerReport fit_granger(const DiffSeries& cases, const DiffSeries& predictor,
                          const GrangerSpec& spec);

struct LagScanRow {
    int m = 0;
    double r2 = 0.0;  // unadjusted, for nesting diagnostics
    double adj_r2 = 0.0;
    double delta_adj_r2 = 0.0;  // vs the previous row; NaN on the first
    double aic = 0.0;
    double bic = 0.0;
    std::size_t model_df = 0;  // parameters excluding the intercept
};

struct LagScanResult {
    std::vector<LagScanRow> rows;
    int recommended = 0;
    double threshold = 0.0;
};

/// Fits the model for every m in [m_lo, m_hi] on a common row set (the rows
/// feasible at m_hi) so information criteria are comparable. Recommends the
/// smallest m after which every adjusted-R2 increment stays below
/// `threshold`.
LagScanResult scan_lags(const DiffSeries& cases, const DiffSeries& predictor,
                        const GrangerSpec& base_spec, int m_lo, int m_hi,
                        double threshold = 0.005);

struct DecayRow {
    int decay_days = 0;
    double adj_r2 = 0.0;
    double aic = 0.0;
    double bic = 0.0;
};

struct DecayScanResult {
    std::vector<DecayRow> rows;
    int best_decay = 0;  // AIC-minimizing coding
};

/// Refits the full model with each pulse decay coding.
DecayScanResult compare_decays(const DiffSeries& cases, const DiffSeries& predictor,
                               const GrangerSpec& spec, const std::vector<int>& decay_days);

struct RegionData {
    DiffSeries cases;
    DiffSeries predictor;
};

/// Independent fit per region with a shared spec, reported in region-name
/// order. When `intervention_regions` is given, the pulse is applied only to
/// the listed regions.
std::vector<std::pair<std::string, GrangerReport>> region_split_analysis(
    const std::vector<std::pair<std::string, RegionData>>& regions, const GrangerSpec& spec,
    const std::optional<std::set<std::string>>& intervention_regions = std::nullopt);

} // namespace infoveil
