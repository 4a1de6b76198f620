#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "infoveil/series.hpp"

namespace infoveil {

/// Ground-truth generator parameters. The case-difference process is
///   dC_t = sum_i ar[i-1] dC_{t-i} + sum_{(j,b) in kernel} b dS_{t-j}
///        + pulse_t + N(0, noise_sd_cases^2)
/// with dS_t = post_base_rate + N(0, noise_sd_posts^2). Levels are
/// integrated from the differences and clamped at zero. All noise comes
/// from a counter-based generator (see rng.hpp), so output is a pure
/// function of this struct.
struct SynthConfig {
    int days = 150;  // number of level days emitted
    Date start_date = Date::from_ymd(2019, 11, 1);
    std::map<int, double> kernel;  // lag -> true coefficient b_j
    std::vector<double> ar;        // a_1, a_2, ... on lagged dC
    std::optional<std::pair<Date, double>> pulse;  // date, magnitude added to dC
    double noise_sd_cases = 10.0;
    double noise_sd_posts = 3.0;
    double post_base_rate = 5.0;  // mean daily growth of sick posts
    double cases_level0 = 500.0;
    double posts_level0 = 100.0;
    double other_scale = 20.0;  // other-post volume relative to sick posts
    std::uint64_t seed = 1;
};

struct SynthTruth {
    SynthConfig config;
    DailySeries cases;
    DailySeries sick_posts;
    DailySeries other_posts;
    DailySeries totals;  // constant 1e6, so normalization is the identity
    int clamped_case_days = 0;
    int clamped_post_days = 0;

    bool heavy_clamping() const {
        const int limit = config.days / 20;
        return clamped_case_days > limit || clamped_post_days > limit;
    }
};

/// Validates the config (stable AR polynomial, positive scales, pulse date
/// in range) and generates the truth bundle. Bit-identical for equal
/// configs.
SynthTruth generate(const SynthConfig& config);

/// Largest root modulus of the AR companion polynomial; stability requires
/// this to stay below 1.
double ar_spectral_radius(const std::vector<double>& ar);

} // namespace infoveil
