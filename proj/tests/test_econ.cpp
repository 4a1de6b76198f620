#include <doctest.h>

#include <cmath>

#include "infoveil/econ.hpp"
#include "infoveil/rng.hpp"
#include "infoveil/stats.hpp"
#include "oracles.hpp"

using namespace infoveil;

namespace {

struct Problem {
    DesignMatrix X;
    std::vector<double> y;
    std::vector<std::vector<double>> cols;  // oracle-side copy, intercept first
};

Problem random_problem(CounterRng& rng, std::size_t n, std::size_t k_extra) {
    Problem p{DesignMatrix::create(n), {}, {}};
    p.cols.emplace_back(n, 1.0);
    for (std::size_t j = 0; j < k_extra; ++j) {
        std::vector<double> col(n);
        for (auto& v : col) v = rng.next_gaussian(0.0, 1.0 + 3.0 * rng.next_uniform());
        p.X.add_column("x" + std::to_string(j + 1), col);
        p.cols.push_back(col);
    }
    p.y.resize(n);
    for (auto& v : p.y) v = rng.next_gaussian(0.0, 2.0);
    return p;
}

std::vector<std::vector<double>> mat_to_vv(const Mat& m) {
    std::vector<std::vector<double>> out(m.rows, std::vector<double>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out[i][j] = m(i, j);
    return out;
}

} // namespace

TEST_SUITE("ols") {
    TEST_CASE("exact line fit") {
        DesignMatrix X = DesignMatrix::create(3);
        X.add_column("x", {1, 2, 3});
        const RegressionFit fit = ols_fit(X, {1, 2, 3});
        CHECK(fit.coefficients[0] == doctest::Approx(0.0).scale(1.0));
        CHECK(fit.coefficients[1] == doctest::Approx(1.0));
        CHECK(fit.rss == doctest::Approx(0.0).scale(1.0));
        CHECK(fit.r2 == doctest::Approx(1.0));
        // exact fit: robust covariance collapses to zero
        for (std::size_t i = 0; i < fit.k; ++i)
            for (std::size_t j = 0; j < fit.k; ++j)
                CHECK(std::fabs(fit.robust_cov(i, j)) < 1e-18);
        CHECK(std::isnan(fit.aic));
        CHECK_THROWS_AS(information_criteria(fit), Error);
    }

    TEST_CASE("matches the normal-equations oracle on random problems") {
        CounterRng rng(11);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t n = 20 + static_cast<std::size_t>(rng.next_uniform() * 80);
            const std::size_t k = 1 + static_cast<std::size_t>(rng.next_uniform() * 6);
            Problem p = random_problem(rng, n, k);
            const RegressionFit fit = ols_fit(p.X, p.y);
            const auto beta = oracle::normal_equations(p.cols, p.y);
            for (std::size_t j = 0; j < beta.size(); ++j)
                CHECK(fit.coefficients[j] ==
                      doctest::Approx(beta[j]).epsilon(1e-9).scale(1.0));
        }
    }

    TEST_CASE("residuals orthogonal to every column") {
        CounterRng rng(12);
        Problem p = random_problem(rng, 60, 5);
        const RegressionFit fit = ols_fit(p.X, p.y);
        double ynorm = 0.0;
        for (double v : p.y) ynorm += v * v;
        ynorm = std::sqrt(ynorm);
        for (std::size_t j = 0; j < p.cols.size(); ++j) {
            double dot = 0.0, xnorm = 0.0;
            for (std::size_t i = 0; i < p.y.size(); ++i) {
                dot += p.cols[j][i] * fit.residuals[i];
                xnorm += p.cols[j][i] * p.cols[j][i];
            }
            CHECK(std::fabs(dot) <= 1e-7 * std::sqrt(xnorm) * ynorm);
        }
    }

    TEST_CASE("insufficient rows and rank deficiency") {
        DesignMatrix X = DesignMatrix::create(2);
        X.add_column("x", {1, 2});
        CHECK_THROWS_AS(ols_fit(X, {1, 2}), Error);  // n == k

        DesignMatrix R = DesignMatrix::create(10);
        std::vector<double> a(10), twice(10);
        CounterRng rng(3);
        for (std::size_t i = 0; i < 10; ++i) { a[i] = rng.next_gaussian(); twice[i] = 2 * a[i]; }
        R.add_column("a", a);
        R.add_column("a_doubled", twice);
        try {
            ols_fit(R, std::vector<double>(10, 1.0));
            FAIL("expected rank error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::RankDeficient);
            CHECK(std::string(e.what()).find("a_doubled") != std::string::npos);
        }
    }

    TEST_CASE("paper-shaped model dimensions: 122 rows, 42 columns") {
        CounterRng rng(8);
        DesignMatrix X = DesignMatrix::create(122);
        for (int i = 1; i <= 20; ++i) {
            std::vector<double> c(122);
            for (auto& v : c) v = rng.next_gaussian();
            X.add_column("cases_lag" + std::to_string(i), c);
        }
        for (int j = 1; j <= 20; ++j) {
            std::vector<double> c(122);
            for (auto& v : c) v = rng.next_gaussian();
            X.add_column("signal_lag" + std::to_string(j), c);
        }
        std::vector<double> pulse(122, 0.0);
        pulse[61] = 1.0;
        X.add_column("intervention", pulse);
        std::vector<double> y(122);
        for (auto& v : y) v = rng.next_gaussian();
        const RegressionFit fit = ols_fit(X, y);
        CHECK(fit.k == 42);
        CHECK(fit.residual_df == 80);
    }

    TEST_CASE("adding a column never lowers unadjusted r2") {
        CounterRng rng(21);
        for (int trial = 0; trial < 10; ++trial) {
            Problem p = random_problem(rng, 50, 3);
            const double r2_small = ols_fit(p.X, p.y).r2;
            std::vector<double> extra(50);
            for (auto& v : extra) v = rng.next_gaussian();
            p.X.add_column("extra", extra);
            CHECK(ols_fit(p.X, p.y).r2 >= r2_small - 1e-12);
        }
    }

    TEST_CASE("covariance matrices symmetric and nearly psd") {
        CounterRng rng(33);
        Problem p = random_problem(rng, 80, 6);
        for (RobustFlavor flavor : {RobustFlavor::HC0, RobustFlavor::HC1, RobustFlavor::HC3}) {
            const RegressionFit fit = ols_fit(p.X, p.y, flavor);
            for (std::size_t i = 0; i < fit.k; ++i)
                for (std::size_t j = 0; j < fit.k; ++j) {
                    CHECK(std::fabs(fit.robust_cov(i, j) - fit.robust_cov(j, i)) < 1e-12);
                    CHECK(std::fabs(fit.classical_cov(i, j) - fit.classical_cov(j, i)) < 1e-12);
                }
            CHECK(oracle::min_eigenvalue(mat_to_vv(fit.robust_cov)) > -1e-8);
            CHECK(oracle::min_eigenvalue(mat_to_vv(fit.classical_cov)) > -1e-8);
        }
    }
}

TEST_SUITE("robust covariance") {
    TEST_CASE("hc1 matches the element-wise sandwich oracle") {
        CounterRng rng(14);
        for (int trial = 0; trial < 10; ++trial) {
            Problem p = random_problem(rng, 40, 4);
            const RegressionFit fit = ols_fit(p.X, p.y, RobustFlavor::HC1);
            std::vector<double> w(fit.n);
            const double c = static_cast<double>(fit.n) / static_cast<double>(fit.n - fit.k);
            for (std::size_t i = 0; i < fit.n; ++i)
                w[i] = c * fit.residuals[i] * fit.residuals[i];
            const auto want = oracle::sandwich(p.cols, w);
            for (std::size_t i = 0; i < fit.k; ++i)
                for (std::size_t j = 0; j < fit.k; ++j)
                    CHECK(fit.robust_cov(i, j) ==
                          doctest::Approx(want[i][j]).epsilon(1e-9).scale(1.0));
        }
    }

    TEST_CASE("hc0 omits the small-sample factor") {
        CounterRng rng(15);
        Problem p = random_problem(rng, 30, 3);
        const RegressionFit fit = ols_fit(p.X, p.y, RobustFlavor::HC0);
        const Mat hc1 = robust_covariance(fit, p.X, RobustFlavor::HC1);
        const double c = static_cast<double>(fit.n) / static_cast<double>(fit.n - fit.k);
        for (std::size_t i = 0; i < fit.k; ++i)
            CHECK(hc1(i, i) == doctest::Approx(c * fit.robust_cov(i, i)).epsilon(1e-12));
    }

    TEST_CASE("hc3 inflates relative to hc0") {
        CounterRng rng(16);
        Problem p = random_problem(rng, 30, 3);
        const RegressionFit fit = ols_fit(p.X, p.y, RobustFlavor::HC0);
        const Mat hc3 = robust_covariance(fit, p.X, RobustFlavor::HC3);
        for (std::size_t i = 0; i < fit.k; ++i) CHECK(hc3(i, i) > fit.robust_cov(i, i));
    }

    TEST_CASE("homoskedastic data keeps robust close to classical on average") {
        CounterRng rng(18);
        double ratio_sum = 0.0;
        int count = 0;
        for (int seed = 0; seed < 200; ++seed) {
            CounterRng prng(1000 + seed);
            Problem p = random_problem(prng, 400, 3);
            // regenerate y from a homoskedastic model
            for (std::size_t i = 0; i < p.y.size(); ++i)
                p.y[i] = 1.0 + 0.5 * p.cols[1][i] + prng.next_gaussian();
            const RegressionFit fit = ols_fit(p.X, p.y, RobustFlavor::HC1);
            for (std::size_t j = 0; j < fit.k; ++j) {
                ratio_sum += fit.robust_se(j) / fit.classical_se(j);
                ++count;
            }
        }
        const double mean_ratio = ratio_sum / count;
        CHECK(std::fabs(mean_ratio - 1.0) < 0.15);
        (void)rng;
    }
}

TEST_SUITE("information criteria") {
    TEST_CASE("matches the direct formula") {
        CounterRng rng(19);
        Problem p = random_problem(rng, 70, 4);
        const RegressionFit fit = ols_fit(p.X, p.y);
        const auto ic = information_criteria(fit);
        const double n = 70.0, pp = 6.0;  // k + 1 with the variance counted
        const double want_aic = n * std::log(2 * M_PI) + n * std::log(fit.rss / n) + n + 2 * pp;
        const double want_bic =
            n * std::log(2 * M_PI) + n * std::log(fit.rss / n) + n + pp * std::log(n);
        CHECK(ic.aic == doctest::Approx(want_aic).epsilon(1e-12));
        CHECK(ic.bic == doctest::Approx(want_bic).epsilon(1e-12));
        CHECK(fit.aic == doctest::Approx(want_aic).epsilon(1e-12));
    }

    TEST_CASE("bic minus aic identity") {
        CounterRng rng(20);
        for (int trial = 0; trial < 5; ++trial) {
            const std::size_t n = 30 + static_cast<std::size_t>(rng.next_uniform() * 100);
            Problem p = random_problem(rng, n, 2 + trial);
            const RegressionFit fit = ols_fit(p.X, p.y);
            const double pp = static_cast<double>(fit.k + 1);
            CHECK(fit.bic - fit.aic ==
                  doctest::Approx(pp * (std::log(static_cast<double>(n)) - 2.0)).epsilon(1e-10));
        }
    }

    TEST_CASE("equal rss: fewer parameters means smaller criteria") {
        RegressionFit small;
        small.rss = 100.0;
        small.n = 50;
        small.k = 3;
        RegressionFit big = small;
        big.k = 7;
        const auto ic_small = information_criteria(small);
        const auto ic_big = information_criteria(big);
        CHECK(ic_small.aic < ic_big.aic);
        CHECK(ic_small.bic < ic_big.bic);
    }

    TEST_CASE("criterion ordering invariant to the additive constant convention") {
        // two models on the same y and n: differences cancel any constant
        CounterRng rng(22);
        Problem p = random_problem(rng, 60, 5);
        const RegressionFit full = ols_fit(p.X, p.y);
        DesignMatrix sub = DesignMatrix::create(60);
        std::vector<double> col(60);
        std::copy(p.X.col(1), p.X.col(1) + 60, col.begin());
        sub.add_column("x1", col);
        const RegressionFit nested = ols_fit(sub, p.y);
        const double delta_with_const = full.aic - nested.aic;
        // recompute both without the n ln(2 pi) + n constant
        auto bare = [](const RegressionFit& f) {
            const double n = static_cast<double>(f.n);
            return n * std::log(f.rss / n) + 2.0 * (f.k + 1);
        };
        CHECK(delta_with_const == doctest::Approx(bare(full) - bare(nested)).epsilon(1e-9));
    }
}

TEST_SUITE("standardized coefficients and intervals") {
    TEST_CASE("pre-standardized data returns the raw slope") {
        CounterRng rng(23);
        const std::size_t n = 200;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = rng.next_gaussian();
        auto standardize = [&](std::vector<double>& v) {
            double mean = 0, ss = 0;
            for (double t : v) mean += t;
            mean /= n;
            for (double t : v) ss += (t - mean) * (t - mean);
            const double sd = std::sqrt(ss / (n - 1));
            for (double& t : v) t = (t - mean) / sd;
        };
        for (std::size_t i = 0; i < n; ++i) y[i] = 0.4 * x[i] + rng.next_gaussian();
        standardize(x);
        standardize(y);
        DesignMatrix X = DesignMatrix::create(n);
        X.add_column("x", x);
        const RegressionFit fit = ols_fit(X, y);
        const auto std_coefs = standardized_coefficients(fit, X, y);
        CHECK(std_coefs[0] == doctest::Approx(fit.coefficients[1]).epsilon(1e-12));
    }

    TEST_CASE("rescaling a predictor leaves its standardized effect unchanged") {
        CounterRng rng(24);
        const std::size_t n = 120;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.next_gaussian(0, 2);
            y[i] = 1.5 * x[i] + rng.next_gaussian();
        }
        DesignMatrix X = DesignMatrix::create(n);
        X.add_column("x", x);
        const auto base = standardized_coefficients(ols_fit(X, y), X, y);
        for (double c : {0.001, 7.0, 3200.0}) {
            std::vector<double> xs = x;
            for (auto& v : xs) v *= c;
            DesignMatrix Xs = DesignMatrix::create(n);
            Xs.add_column("x", xs);
            const auto scaled = standardized_coefficients(ols_fit(Xs, y), Xs, y);
            CHECK(scaled[0] == doctest::Approx(base[0]).epsilon(1e-9));
        }
    }

    TEST_CASE("zero-variance column is a domain error naming the column") {
        DesignMatrix X = DesignMatrix::create(10);
        std::vector<double> flat(10, 4.0), x(10);
        CounterRng rng(25);
        for (auto& v : x) v = rng.next_gaussian();
        X.add_column("x", x);
        std::vector<double> y(10);
        for (auto& v : y) v = rng.next_gaussian();
        const RegressionFit fit = ols_fit(X, y);
        DesignMatrix bad = DesignMatrix::create(10);
        bad.add_column("x", x);
        // tamper: constant non-intercept column cannot be built through ols
        // (rank error), so exercise the check directly on a shadow design
        RegressionFit shadow = fit;
        DesignMatrix Z = DesignMatrix::create(10);
        Z.add_column("flat_col", flat);
        shadow.names = Z.names;
        try {
            standardized_coefficients(shadow, Z, y);
            FAIL("expected domain error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Domain);
            CHECK(std::string(e.what()).find("flat_col") != std::string::npos);
        }
    }

    TEST_CASE("confidence interval contains the estimate and uses robust ses") {
        CounterRng rng(26);
        Problem p = random_problem(rng, 90, 4);
        const RegressionFit fit = ols_fit(p.X, p.y);
        const Interval ci = confidence_interval(fit, "x2", 0.95);
        const double b = fit.coefficient("x2");
        CHECK(ci.lo < b);
        CHECK(b < ci.hi);
        const double tq = student_t_quantile(0.975, static_cast<double>(fit.residual_df));
        const std::size_t j = fit.column_index("x2");
        CHECK(ci.hi - b == doctest::Approx(tq * fit.robust_se(j)).epsilon(1e-12));

        CHECK_THROWS_AS(confidence_interval(fit, "nope", 0.95), Error);
        CHECK_THROWS_AS(confidence_interval(fit, "x2", 1.5), Error);
    }
}

TEST_SUITE("unit root") {
    TEST_CASE("t statistic invariant to positive rescaling") {
        CounterRng rng(27);
        std::vector<double> y(200);
        double level = 0.0;
        for (auto& v : y) { level += rng.next_gaussian(); v = level; }
        for (UnitRootVariant variant :
             {UnitRootVariant::AdfNoTrend, UnitRootVariant::DfGlsDemeaned}) {
            const double base = unit_root_test(y, 3, variant).t_stat;
            for (double c : {0.01, 42.0}) {
                std::vector<double> ys = y;
                for (auto& v : ys) v *= c;
                CHECK(unit_root_test(ys, 3, variant).t_stat ==
                      doctest::Approx(base).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("critical values ordered and lag-keyed for the gls variant") {
        CounterRng rng(28);
        std::vector<double> y(122);
        double level = 0.0;
        for (auto& v : y) { level += rng.next_gaussian(); v = level; }
        const UnitRootResult r1 = unit_root_test(y, 1, UnitRootVariant::DfGlsDemeaned);
        CHECK(r1.cv1 < r1.cv5);
        CHECK(r1.cv5 < r1.cv10);
        // anchored table at n = 122
        CHECK(r1.cv1 == doctest::Approx(-2.597).epsilon(1e-9));
        CHECK(r1.cv5 == doctest::Approx(-2.120).epsilon(1e-9));
        CHECK(r1.cv10 == doctest::Approx(-1.814).epsilon(1e-9));
        const UnitRootResult r29 = unit_root_test(y, 29, UnitRootVariant::DfGlsDemeaned);
        CHECK(r29.cv5 == doctest::Approx(-1.899).epsilon(1e-9));
        CHECK(r29.cv10 == doctest::Approx(-1.557).epsilon(1e-9));
        CHECK(r29.cv1 == doctest::Approx(-2.597).epsilon(1e-9));
    }

    TEST_CASE("adf critical values track the sample size") {
        CounterRng rng(29);
        std::vector<double> y(500);
        double level = 0.0;
        for (auto& v : y) { level += rng.next_gaussian(); v = level; }
        const UnitRootResult r = unit_root_test(y, 2, UnitRootVariant::AdfNoTrend);
        CHECK(r.cv5 == doctest::Approx(-2.86734).epsilon(1e-4));
        CHECK(r.cv1 < r.cv5);
        CHECK(r.cv5 < r.cv10);
    }

    TEST_CASE("first difference of a random walk strongly rejects") {
        int rejections = 0;
        const int seeds = 200;
        for (int s = 0; s < seeds; ++s) {
            CounterRng rng(4000 + s);
            std::vector<double> y(500);
            double level = 0.0;
            for (auto& v : y) { level += rng.next_gaussian(); v = level; }
            std::vector<double> dy(y.size() - 1);
            for (std::size_t i = 0; i + 1 < y.size(); ++i) dy[i] = y[i + 1] - y[i];
            if (unit_root_test(dy, 2, UnitRootVariant::AdfNoTrend).rejects(0.01)) ++rejections;
        }
        CHECK(rejections >= static_cast<int>(0.95 * seeds));
    }

    TEST_CASE("too-short series rejected") {
        std::vector<double> y(10, 1.0);
        CHECK_THROWS_AS(unit_root_test(y, 8, UnitRootVariant::AdfNoTrend), Error);
    }
}
