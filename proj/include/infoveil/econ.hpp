#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "infoveil/error.hpp"

namespace infoveil {

/// Small dense matrix, row-major. Only used for covariance blocks, so no
/// attempt at a full linear-algebra interface.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

enum class RobustFlavor { HC0, HC1, HC3 };

/// Regression design: named columns, column-major storage, the first column
/// is always the all-ones intercept.
struct DesignMatrix {
    std::size_t n = 0;
    std::vector<std::string> names;
    std::vector<double> data;  // column-major, n * names.size()

    /// Starts a design of `rows` observations with the intercept column.
    static DesignMatrix create(std::size_t rows);

    void add_column(std::string name, const std::vector<double>& column);

    std::size_t cols() const noexcept { return names.size(); }
    double at(std::size_t i, std::size_t j) const { return data[j * n + i]; }
    const double* col(std::size_t j) const { return data.data() + j * n; }
    std::size_t column_index(const std::string& name) const;

    /// Checks the structural invariants (intercept first and unique, finite
    /// entries, n >= k). ols_fit runs this on every call.
    void validate() const;
};

struct RegressionFit {
    std::vector<std::string> names;
    std::vector<double> coefficients;
    std::vector<double> residuals;
    Mat classical_cov;
    Mat robust_cov;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    double aic = 0.0;  // NaN when RSS == 0
    double bic = 0.0;  // NaN when RSS == 0
    double rss = 0.0;
    double sigma2 = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t residual_df = 0;
    RobustFlavor flavor = RobustFlavor::HC1;

    std::size_t column_index(const std::string& name) const;
    double coefficient(const std::string& name) const;
    double classical_se(std::size_t j) const;
    double robust_se(std::size_t j) const;
};

/// Least squares via Householder QR. Computes residuals, classical and
/// robust covariance, fit statistics and information criteria in one pass.
/// Throws RankDeficient naming the offending column when the factor diagonal
/// collapses below 1e-10 of its largest entry.
RegressionFit ols_fit(const DesignMatrix& X, const std::vector<double>& y,
                      RobustFlavor flavor = RobustFlavor::HC1);

/// Heteroskedasticity-consistent sandwich covariance for an existing fit.
/// HC1 applies the n/(n-k) small-sample factor, HC3 the squared hat-value
/// deflation.
Mat robust_covariance(const RegressionFit& fit, const DesignMatrix& X, RobustFlavor flavor);

struct InformationCriteria {
    double aic;
    double bic;
};

/// Gaussian-likelihood form with the variance counted as a parameter:
///   aic = n ln(2 pi) + n ln(RSS/n) + n + 2 p,   p = k + 1
///   bic = n ln(2 pi) + n ln(RSS/n) + n + p ln(n)
InformationCriteria information_criteria(const RegressionFit& fit);

/// b_std_j = b_j * sd(x_j) / sd(y) for every non-intercept column, sample
/// standard deviations over the estimation rows.
std::vector<double> standardized_coefficients(const RegressionFit& fit, const DesignMatrix& X,
                                              const std::vector<double>& y);

struct Interval {
    double lo;
    double hi;
};

/// Robust-SE confidence interval using the Student-t quantile at the fit's
/// residual degrees of freedom.
Interval confidence_interval(const RegressionFit& fit, const std::string& column, double level);

enum class UnitRootVariant { AdfNoTrend, DfGlsDemeaned };

struct UnitRootResult {
    double t_stat = 0.0;
    int lags = 0;
    double cv1 = 0.0;   // 1% critical value
    double cv5 = 0.0;   // 5%
    double cv10 = 0.0;  // 10%
    UnitRootVariant variant = UnitRootVariant::AdfNoTrend;

    /// Rejection of the unit root at the 0.01 / 0.05 / 0.10 level.
    bool rejects(double level) const;
};

/// Dickey-Fuller unit-root test without trend.
///
/// AdfNoTrend regresses dy_t on an intercept, y_{t-1} and dy_{t-1..max_lag};
/// the statistic is the t-ratio on y_{t-1}. DfGlsDemeaned first GLS-demeans
/// the series (local alternative c = -7) and runs the same regression with
/// no deterministic terms. Critical values come from built-in tables keyed
/// by (variant, effective sample size, lags), interpolated linearly in 1/n.
UnitRootResult unit_root_test(const std::vector<double>& series, int max_lag,
                              UnitRootVariant variant);

const char* to_string(RobustFlavor flavor);
const char* to_string(UnitRootVariant variant);

} // namespace infoveil
