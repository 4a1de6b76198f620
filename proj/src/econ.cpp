#include "infoveil/econ.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infoveil/stats.hpp"

namespace infoveil {

namespace {

constexpr double kRankTolerance = 1e-10;

struct Lsq {
    std::vector<double> beta;
    std::vector<double> resid;
    double rss = 0.0;
    Mat xtx_inv;
};

// Householder QR on column pointers. `names` is only for diagnostics.
Lsq least_squares(std::size_t n, const std::vector<const double*>& cols,
                  const std::vector<double>& y, const std::vector<std::string>& names) {
    const std::size_t k = cols.size();
    if (y.size() != n)
        raise(ErrorKind::InvalidInput, "ols: y has " + std::to_string(y.size()) +
                                           " entries for " + std::to_string(n) + " rows");
    if (n <= k)
        raise(ErrorKind::InsufficientData,
              "ols: need more rows than columns (n=" + std::to_string(n) +
                  ", k=" + std::to_string(k) + ")");

    // Work copies; the lower part of column j keeps the reflector vector.
    std::vector<double> A(n * k);
    for (std::size_t j = 0; j < k; ++j)
        std::copy(cols[j], cols[j] + n, A.begin() + static_cast<std::ptrdiff_t>(j * n));
    std::vector<double> qty = y;

    auto a = [&](std::size_t i, std::size_t j) -> double& { return A[j * n + i]; };

    for (std::size_t j = 0; j < k; ++j) {
        double norm2 = 0.0;
        for (std::size_t i = j; i < n; ++i) norm2 += a(i, j) * a(i, j);
        const double norm = std::sqrt(norm2);
        const double alpha = a(j, j) > 0.0 ? -norm : norm;
        const double v0 = a(j, j) - alpha;
        double vtv = v0 * v0;
        for (std::size_t i = j + 1; i < n; ++i) vtv += a(i, j) * a(i, j);
        if (vtv > 0.0) {
            for (std::size_t c = j + 1; c < k; ++c) {
                double dot = v0 * a(j, c);
                for (std::size_t i = j + 1; i < n; ++i) dot += a(i, j) * a(i, c);
                const double f = 2.0 * dot / vtv;
                a(j, c) -= f * v0;
                for (std::size_t i = j + 1; i < n; ++i) a(i, c) -= f * a(i, j);
            }
            double dot = v0 * qty[j];
            for (std::size_t i = j + 1; i < n; ++i) dot += a(i, j) * qty[i];
            const double f = 2.0 * dot / vtv;
            qty[j] -= f * v0;
            for (std::size_t i = j + 1; i < n; ++i) qty[i] -= f * a(i, j);
        }
        a(j, j) = alpha;
    }

    double max_diag = 0.0;
    for (std::size_t j = 0; j < k; ++j) max_diag = std::max(max_diag, std::fabs(a(j, j)));
    std::size_t worst = 0;
    double worst_val = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
        const double d = std::fabs(a(j, j));
        if (d < worst_val) { worst_val = d; worst = j; }
    }
    if (max_diag == 0.0 || worst_val < kRankTolerance * max_diag)
        raise(ErrorKind::RankDeficient,
              "ols: design is rank deficient at column '" + names[worst] + "'");

    Lsq out;
    out.beta.assign(k, 0.0);
    for (std::size_t jj = k; jj-- > 0;) {
        double s = qty[jj];
        for (std::size_t c = jj + 1; c < k; ++c) s -= a(jj, c) * out.beta[c];
        out.beta[jj] = s / a(jj, jj);
    }

    out.resid.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double fitv = 0.0;
        for (std::size_t j = 0; j < k; ++j) fitv += cols[j][i] * out.beta[j];
        out.resid[i] = y[i] - fitv;
        out.rss += out.resid[i] * out.resid[i];
    }

    // (X'X)^{-1} = R^{-1} R^{-T} from the triangular factor.
    Mat rinv(k, k);
    for (std::size_t i = k; i-- > 0;) {
        rinv(i, i) = 1.0 / a(i, i);
        for (std::size_t j = i + 1; j < k; ++j) {
            double s = 0.0;
            for (std::size_t l = i + 1; l <= j; ++l) s += a(i, l) * rinv(l, j);
            rinv(i, j) = -s / a(i, i);
        }
    }
    out.xtx_inv = Mat(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            double s = 0.0;
            for (std::size_t l = std::max(i, j); l < k; ++l) s += rinv(i, l) * rinv(j, l);
            out.xtx_inv(i, j) = s;
            out.xtx_inv(j, i) = s;
        }
    return out;
}

Mat sandwich(const Mat& xtx_inv, std::size_t n, std::size_t k,
             const std::vector<const double*>& cols, const std::vector<double>& resid,
             RobustFlavor flavor) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = resid[i] * resid[i];
    if (flavor == RobustFlavor::HC1) {
        const double c = static_cast<double>(n) / static_cast<double>(n - k);
        for (double& wi : w) wi *= c;
    } else if (flavor == RobustFlavor::HC3) {
        for (std::size_t i = 0; i < n; ++i) {
            double h = 0.0;
            for (std::size_t r = 0; r < k; ++r) {
                double s = 0.0;
                for (std::size_t c = 0; c < k; ++c) s += xtx_inv(r, c) * cols[c][i];
                h += cols[r][i] * s;
            }
            const double d = 1.0 - h;
            w[i] /= d * d;
        }
    }
    Mat meat(k, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < k; ++r) {
            const double wr = w[i] * cols[r][i];
            if (wr == 0.0) continue;
            for (std::size_t c = r; c < k; ++c) meat(r, c) += wr * cols[c][i];
        }
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < r; ++c) meat(r, c) = meat(c, r);

    Mat tmp(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) {
            double s = 0.0;
            for (std::size_t l = 0; l < k; ++l) s += xtx_inv(r, l) * meat(l, c);
            tmp(r, c) = s;
        }
    Mat v(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) {
            double s = 0.0;
            for (std::size_t l = 0; l < k; ++l) s += tmp(r, l) * xtx_inv(l, c);
            v(r, c) = s;
        }
    // symmetrize away rounding drift
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = r + 1; c < k; ++c) {
            const double m = 0.5 * (v(r, c) + v(c, r));
            v(r, c) = m;
            v(c, r) = m;
        }
    return v;
}

std::vector<const double*> column_pointers(const DesignMatrix& X) {
    std::vector<const double*> cols(X.cols());
    for (std::size_t j = 0; j < X.cols(); ++j) cols[j] = X.col(j);
    return cols;
}

double sample_sd(const double* v, std::size_t n) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += v[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (v[i] - mean) * (v[i] - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

} // namespace

DesignMatrix DesignMatrix::create(std::size_t rows) {
    if (rows == 0) raise(ErrorKind::InvalidInput, "design matrix needs at least one row");
    DesignMatrix X;
    X.n = rows;
    X.names.push_back("intercept");
    X.data.assign(rows, 1.0);
    return X;
}

void DesignMatrix::add_column(std::string name, const std::vector<double>& column) {
    if (column.size() != n)
        raise(ErrorKind::InvalidInput, "column '" + name + "' has " +
                                           std::to_string(column.size()) + " rows, expected " +
                                           std::to_string(n));
    for (double v : column)
        if (!std::isfinite(v))
            raise(ErrorKind::InvalidInput, "column '" + name + "' contains a non-finite value");
    for (const auto& existing : names)
        if (existing == name)
            raise(ErrorKind::InvalidInput, "duplicate column name '" + name + "'");
    names.push_back(std::move(name));
    data.insert(data.end(), column.begin(), column.end());
}

std::size_t DesignMatrix::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] == name) return j;
    raise(ErrorKind::Lookup, "no column named '" + name + "'");
}

void DesignMatrix::validate() const {
    if (names.empty() || n == 0) raise(ErrorKind::InvalidInput, "empty design matrix");
    if (data.size() != n * names.size())
        raise(ErrorKind::InvalidInput, "design matrix storage does not match its shape");
    if (names[0] != "intercept")
        raise(ErrorKind::InvalidInput, "first design column must be the intercept");
    for (std::size_t i = 0; i < n; ++i)
        if (at(i, 0) != 1.0)
            raise(ErrorKind::InvalidInput, "intercept column must be all ones");
    for (std::size_t j = 1; j < names.size(); ++j)
        if (names[j] == "intercept")
            raise(ErrorKind::InvalidInput, "intercept column present more than once");
    for (double v : data)
        if (!std::isfinite(v))
            raise(ErrorKind::InvalidInput, "design matrix contains a non-finite value");
    if (n < names.size())
        raise(ErrorKind::InsufficientData, "design matrix has fewer rows than columns");
}

std::size_t RegressionFit::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] == name) return j;
    raise(ErrorKind::Lookup, "no coefficient named '" + name + "'");
}

double RegressionFit::coefficient(const std::string& name) const {
    return coefficients[column_index(name)];
}

double RegressionFit::classical_se(std::size_t j) const {
    return std::sqrt(std::max(0.0, classical_cov(j, j)));
}

double RegressionFit::robust_se(std::size_t j) const {
    return std::sqrt(std::max(0.0, robust_cov(j, j)));
}

RegressionFit ols_fit(const DesignMatrix& X, const std::vector<double>& y, RobustFlavor flavor) {
    X.validate();
    for (double v : y)
        if (!std::isfinite(v)) raise(ErrorKind::InvalidInput, "y contains a non-finite value");

    const auto cols = column_pointers(X);
    Lsq ls = least_squares(X.n, cols, y, X.names);

    RegressionFit fit;
    fit.names = X.names;
    fit.coefficients = std::move(ls.beta);
    fit.residuals = std::move(ls.resid);
    fit.rss = ls.rss;
    fit.n = X.n;
    fit.k = X.cols();
    fit.residual_df = fit.n - fit.k;
    fit.flavor = flavor;
    fit.sigma2 = fit.rss / static_cast<double>(fit.residual_df);

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double tss = 0.0;
    for (double v : y) tss += (v - mean) * (v - mean);
    fit.r2 = tss > 0.0 ? std::clamp(1.0 - fit.rss / tss, 0.0, 1.0) : 1.0;
    fit.adj_r2 = 1.0 - (1.0 - fit.r2) * static_cast<double>(fit.n - 1) /
                           static_cast<double>(fit.residual_df);

    fit.classical_cov = Mat(fit.k, fit.k);
    for (std::size_t r = 0; r < fit.k; ++r)
        for (std::size_t c = 0; c < fit.k; ++c)
            fit.classical_cov(r, c) = fit.sigma2 * ls.xtx_inv(r, c);
    fit.robust_cov = sandwich(ls.xtx_inv, fit.n, fit.k, cols, fit.residuals, flavor);

    if (fit.rss > 0.0) {
        const auto ic = information_criteria(fit);
        fit.aic = ic.aic;
        fit.bic = ic.bic;
    } else {
        fit.aic = std::numeric_limits<double>::quiet_NaN();
        fit.bic = std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

Mat robust_covariance(const RegressionFit& fit, const DesignMatrix& X, RobustFlavor flavor) {
    if (X.n != fit.n || X.cols() != fit.k)
        raise(ErrorKind::InvalidInput, "robust_covariance: design does not match fit");
    const auto cols = column_pointers(X);
    // Recover (X'X)^{-1} from the classical covariance when possible,
    // otherwise refactor. sigma2 == 0 happens on exact fits.
    if (fit.sigma2 > 0.0) {
        Mat xtx_inv(fit.k, fit.k);
        for (std::size_t r = 0; r < fit.k; ++r)
            for (std::size_t c = 0; c < fit.k; ++c)
                xtx_inv(r, c) = fit.classical_cov(r, c) / fit.sigma2;
        return sandwich(xtx_inv, fit.n, fit.k, cols, fit.residuals, flavor);
    }
    std::vector<double> y(fit.n, 0.0);
    for (std::size_t i = 0; i < fit.n; ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < fit.k; ++j) v += cols[j][i] * fit.coefficients[j];
        y[i] = v + fit.residuals[i];
    }
    Lsq ls = least_squares(fit.n, cols, y, fit.names);
    return sandwich(ls.xtx_inv, fit.n, fit.k, cols, fit.residuals, flavor);
}

InformationCriteria information_criteria(const RegressionFit& fit) {
    if (fit.rss <= 0.0)
        raise(ErrorKind::Degenerate, "information criteria undefined for a zero-RSS fit");
    const double n = static_cast<double>(fit.n);
    const double p = static_cast<double>(fit.k + 1);  // variance counted
    const double base = n * std::log(2.0 * M_PI) + n * std::log(fit.rss / n) + n;
    return {base + 2.0 * p, base + p * std::log(n)};
}

std::vector<double> standardized_coefficients(const RegressionFit& fit, const DesignMatrix& X,
                                              const std::vector<double>& y) {
    if (X.n != fit.n || X.cols() != fit.k || y.size() != fit.n)
        raise(ErrorKind::InvalidInput, "standardized_coefficients: shapes do not match fit");
    const double sd_y = sample_sd(y.data(), y.size());
    if (sd_y <= 0.0) raise(ErrorKind::Domain, "standardized_coefficients: y has zero variance");
    std::vector<double> out;
    out.reserve(fit.k - 1);
    for (std::size_t j = 1; j < fit.k; ++j) {
        const double sd_x = sample_sd(X.col(j), X.n);
        if (sd_x <= 0.0)
            raise(ErrorKind::Domain,
                  "standardized_coefficients: column '" + fit.names[j] + "' has zero variance");
        out.push_back(fit.coefficients[j] * sd_x / sd_y);
    }
    return out;
}

Interval confidence_interval(const RegressionFit& fit, const std::string& column, double level) {
    if (level <= 0.0 || level >= 1.0)
        raise(ErrorKind::Domain, "confidence level must be in (0, 1)");
    const std::size_t j = fit.column_index(column);
    const double tq = student_t_quantile(0.5 * (1.0 + level), static_cast<double>(fit.residual_df));
    const double se = fit.robust_se(j);
    const double b = fit.coefficients[j];
    return {b - tq * se, b + tq * se};
}

namespace {

// ADF constant-case critical values: MacKinnon (2010) response surfaces
// evaluated at fixed sample sizes. Interpolated linearly in 1/n.
struct CvPivot {
    double n_inv;
    double cv[3];  // 1%, 5%, 10%
};

constexpr CvPivot kAdfConstant[] = {
    {1.0 / 25, {-3.72386, -2.98649, -2.63280}},
    {1.0 / 50, {-3.56849, -2.92136, -2.59866}},
    {1.0 / 100, {-3.49750, -2.89091, -2.58243}},
    {1.0 / 250, {-3.45678, -2.87317, -2.57297}},
    {1.0 / 500, {-3.44350, -2.86734, -2.56986}},
    {1.0 / 1000, {-3.43691, -2.86443, -2.56831}},
    {0.0, {-3.43035, -2.86154, -2.56677}},
};

// GLS-demeaned test, 5% and 10% anchors at n = 122 for lag orders 1..29.
// The 1% value at that sample size is -2.597 for every lag order; all
// levels tend to the no-deterministics asymptotics (-2.58, -1.95, -1.62).
constexpr double kDfGlsAnchorN = 122.0;
constexpr double kDfGls1pAnchor = -2.597;
constexpr double kDfGlsAsym[3] = {-2.58, -1.95, -1.62};
constexpr int kDfGlsMaxLag = 29;
constexpr double kDfGlsAnchor[kDfGlsMaxLag][2] = {
    // 5%, 10% for lags 1..29
    {-2.120, -1.814}, {-2.110, -1.804}, {-2.098, -1.793}, {-2.086, -1.782},
    {-2.073, -1.770}, {-2.059, -1.757}, {-2.044, -1.743}, {-2.030, -1.729},
    {-2.015, -1.715}, {-2.000, -1.701}, {-1.986, -1.686}, {-1.971, -1.672},
    {-1.957, -1.658}, {-1.943, -1.644}, {-1.931, -1.630}, {-1.918, -1.617},
    {-1.907, -1.605}, {-1.897, -1.594}, {-1.888, -1.583}, {-1.881, -1.574},
    {-1.875, -1.565}, {-1.871, -1.558}, {-1.868, -1.553}, {-1.868, -1.549},
    {-1.869, -1.547}, {-1.873, -1.546}, {-1.879, -1.548}, {-1.887, -1.551},
    {-1.899, -1.557},
};

void adf_constant_cv(double n, double out[3]) {
    const double x = 1.0 / n;
    const auto* table = kAdfConstant;
    constexpr std::size_t rows = sizeof(kAdfConstant) / sizeof(kAdfConstant[0]);
    if (x >= table[0].n_inv) {
        for (int i = 0; i < 3; ++i) out[i] = table[0].cv[i];
        return;
    }
    for (std::size_t r = 1; r < rows; ++r) {
        if (x >= table[r].n_inv) {
            const double t = (x - table[r].n_inv) / (table[r - 1].n_inv - table[r].n_inv);
            for (int i = 0; i < 3; ++i)
                out[i] = table[r].cv[i] + t * (table[r - 1].cv[i] - table[r].cv[i]);
            return;
        }
    }
    for (int i = 0; i < 3; ++i) out[i] = table[rows - 1].cv[i];
}

void dfgls_cv(double n, int lags, double out[3]) {
    const int l = std::clamp(lags, 1, kDfGlsMaxLag);
    const double anchors[3] = {kDfGls1pAnchor, kDfGlsAnchor[l - 1][0], kDfGlsAnchor[l - 1][1]};
    // Line through the anchor (1/122) and the asymptote (0) in 1/n, clamped
    // at the anchor for smaller samples.
    const double x = std::min(1.0 / n, 1.0 / kDfGlsAnchorN);
    for (int i = 0; i < 3; ++i)
        out[i] = kDfGlsAsym[i] + (anchors[i] - kDfGlsAsym[i]) * x * kDfGlsAnchorN;
}

// t-ratio on the level term of the augmented regression
//   dy_t = gamma * y_{t-1} + sum_j delta_j dy_{t-j} (+ intercept)
double adf_t_ratio(const std::vector<double>& y, int max_lag, bool intercept) {
    const std::size_t T = y.size();
    const std::size_t n_rows = T - 1 - static_cast<std::size_t>(max_lag);

    std::vector<double> dy(T - 1);
    for (std::size_t i = 0; i + 1 < T; ++i) dy[i] = y[i + 1] - y[i];

    std::vector<std::vector<double>> columns;
    std::vector<std::string> names;
    std::vector<double> rhs(n_rows);
    if (intercept) {
        columns.emplace_back(n_rows, 1.0);
        names.push_back("intercept");
    }
    std::vector<double> level(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        const std::size_t t = r + static_cast<std::size_t>(max_lag);  // index into dy
        rhs[r] = dy[t];   // dy[t] = y[t+1] - y[t]
        level[r] = y[t];  // the level one step before the response
    }
    columns.push_back(std::move(level));
    names.push_back("y_lag1");
    for (int j = 1; j <= max_lag; ++j) {
        std::vector<double> c(n_rows);
        for (std::size_t r = 0; r < n_rows; ++r)
            c[r] = dy[r + static_cast<std::size_t>(max_lag) - static_cast<std::size_t>(j)];
        columns.push_back(std::move(c));
        names.push_back("dy_lag" + std::to_string(j));
    }

    std::vector<const double*> cols;
    cols.reserve(columns.size());
    for (const auto& c : columns) cols.push_back(c.data());
    Lsq ls = least_squares(n_rows, cols, rhs, names);

    const std::size_t k = cols.size();
    const std::size_t gamma_ix = intercept ? 1 : 0;
    const double sigma2 = ls.rss / static_cast<double>(n_rows - k);
    const double se = std::sqrt(sigma2 * ls.xtx_inv(gamma_ix, gamma_ix));
    if (se == 0.0) raise(ErrorKind::Degenerate, "unit root test: zero standard error");
    return ls.beta[gamma_ix] / se;
}

} // namespace

bool UnitRootResult::rejects(double level) const {
    if (level == 0.01) return t_stat < cv1;
    if (level == 0.05) return t_stat < cv5;
    if (level == 0.10) return t_stat < cv10;
    raise(ErrorKind::Domain, "supported rejection levels are 0.01, 0.05, 0.10");
}

UnitRootResult unit_root_test(const std::vector<double>& series, int max_lag,
                              UnitRootVariant variant) {
    if (max_lag < 0) raise(ErrorKind::InvalidInput, "max_lag must be >= 0");
    const std::size_t T = series.size();
    const std::size_t k = (variant == UnitRootVariant::AdfNoTrend ? 2 : 1) +
                          static_cast<std::size_t>(max_lag);
    if (T <= static_cast<std::size_t>(max_lag) + 2 || T - 1 - static_cast<std::size_t>(max_lag) <= k)
        raise(ErrorKind::InsufficientData,
              "unit root test: series of length " + std::to_string(T) +
                  " is too short for max_lag " + std::to_string(max_lag));
    for (double v : series)
        if (!std::isfinite(v))
            raise(ErrorKind::InvalidInput, "unit root test: non-finite value in series");

    UnitRootResult res;
    res.lags = max_lag;
    res.variant = variant;

    double cv[3];
    if (variant == UnitRootVariant::AdfNoTrend) {
        res.t_stat = adf_t_ratio(series, max_lag, /*intercept=*/true);
        adf_constant_cv(static_cast<double>(T), cv);
    } else {
        // GLS demeaning, local-to-unity coefficient c = -7.
        const double rho = 1.0 - 7.0 / static_cast<double>(T);
        double szw = series[0];
        double sww = 1.0;
        for (std::size_t t = 1; t < T; ++t) {
            const double z = series[t] - rho * series[t - 1];
            const double w = 1.0 - rho;
            szw += z * w;
            sww += w * w;
        }
        const double mu = szw / sww;
        std::vector<double> demeaned(T);
        for (std::size_t t = 0; t < T; ++t) demeaned[t] = series[t] - mu;
        res.t_stat = adf_t_ratio(demeaned, max_lag, /*intercept=*/false);
        dfgls_cv(static_cast<double>(T), max_lag, cv);
    }
    res.cv1 = cv[0];
    res.cv5 = cv[1];
    res.cv10 = cv[2];
    return res;
}

const char* to_string(RobustFlavor flavor) {
    switch (flavor) {
    case RobustFlavor::HC0: return "hc0";
    case RobustFlavor::HC1: return "hc1";
    case RobustFlavor::HC3: return "hc3";
    }
    return "hc1";
}

const char* to_string(UnitRootVariant variant) {
    return variant == UnitRootVariant::AdfNoTrend ? "adf" : "dfgls";
}

} // namespace infoveil
