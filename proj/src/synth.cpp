#include "infoveil/synth.hpp"

#include <cmath>
#include <complex>

#include "infoveil/rng.hpp"

namespace infoveil {

namespace {

void validate(const SynthConfig& c) {
    if (c.days < 3) raise(ErrorKind::Config, "synth: days must be >= 3");
    for (const auto& [lag, coef] : c.kernel) {
        if (lag < 1) raise(ErrorKind::Config, "synth: kernel lags must be >= 1");
        if (!std::isfinite(coef)) raise(ErrorKind::Config, "synth: kernel coefficient not finite");
        if (lag >= c.days - 1)
            raise(ErrorKind::Config, "synth: kernel lag " + std::to_string(lag) +
                                         " exceeds the generated range");
    }
    if (c.noise_sd_cases <= 0.0 || c.noise_sd_posts <= 0.0)
        raise(ErrorKind::Config, "synth: noise standard deviations must be positive");
    if (c.post_base_rate <= 0.0) raise(ErrorKind::Config, "synth: post_base_rate must be positive");
    if (c.other_scale <= 0.0) raise(ErrorKind::Config, "synth: other_scale must be positive");
    if (!c.ar.empty() && ar_spectral_radius(c.ar) >= 1.0 - 1e-9)
        raise(ErrorKind::Config, "synth: AR specification is not stationary");
    if (c.pulse) {
        const Date lo = c.start_date + 1;
        const Date hi = c.start_date + (c.days - 1);
        if (c.pulse->first < lo || c.pulse->first > hi)
            raise(ErrorKind::Config, "synth: pulse date " + c.pulse->first.to_string() +
                                         " outside generated difference range [" + lo.to_string() +
                                         ", " + hi.to_string() + "]");
    }
}

DailySeries integrate(Date start, double level0, const std::vector<double>& diffs,
                      const std::string& label, int& clamped) {
    std::vector<double> levels;
    levels.reserve(diffs.size() + 1);
    levels.push_back(std::max(0.0, level0));
    for (double d : diffs) {
        double next = levels.back() + d;
        if (next < 0.0) { next = 0.0; ++clamped; }
        levels.push_back(next);
    }
    return DailySeries(start, std::move(levels), label);
}

} // namespace

double ar_spectral_radius(const std::vector<double>& ar) {
    // Durand-Kerner on z^p - a_1 z^{p-1} - ... - a_p.
    const std::size_t p = ar.size();
    if (p == 0) return 0.0;
    std::vector<std::complex<double>> coef(p + 1);  // coef[i] multiplies z^i
    coef[p] = 1.0;
    for (std::size_t i = 0; i < p; ++i) coef[p - 1 - i] = -ar[i];

    auto eval = [&](std::complex<double> z) {
        std::complex<double> v = 0.0;
        for (std::size_t i = p + 1; i-- > 0;) v = v * z + coef[i];
        return v;
    };

    std::vector<std::complex<double>> roots(p);
    const std::complex<double> w(0.4, 0.9);
    std::complex<double> acc = 1.0;
    for (std::size_t i = 0; i < p; ++i) { acc *= w; roots[i] = acc; }
    for (int iter = 0; iter < 500; ++iter) {
        double shift = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            std::complex<double> denom = 1.0;
            for (std::size_t j = 0; j < p; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            const std::complex<double> delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-13) break;
    }
    double radius = 0.0;
    for (const auto& r : roots) radius = std::max(radius, std::abs(r));
    return radius;
}

SynthTruth generate(const SynthConfig& config) {
    validate(config);

    const std::size_t n_diffs = static_cast<std::size_t>(config.days) - 1;
    CounterRng posts_rng(config.seed, 0);
    CounterRng cases_rng(config.seed, 1);
    CounterRng other_rng(config.seed, 2);

    std::vector<double> d_sick(n_diffs);
    for (auto& v : d_sick) v = config.post_base_rate + posts_rng.next_gaussian(0.0, config.noise_sd_posts);

    std::vector<double> d_other(n_diffs);
    for (auto& v : d_other)
        v = config.other_scale *
            (config.post_base_rate + other_rng.next_gaussian(0.0, config.noise_sd_posts));

    const std::size_t pulse_index =
        config.pulse ? static_cast<std::size_t>(config.pulse->first - (config.start_date + 1))
                     : n_diffs;

    std::vector<double> d_cases(n_diffs);
    for (std::size_t t = 0; t < n_diffs; ++t) {
        double v = cases_rng.next_gaussian(0.0, config.noise_sd_cases);
        for (std::size_t i = 0; i < config.ar.size(); ++i)
            if (t >= i + 1) v += config.ar[i] * d_cases[t - i - 1];
        for (const auto& [lag, coef] : config.kernel)
            if (t >= static_cast<std::size_t>(lag)) v += coef * d_sick[t - lag];
        if (config.pulse && t == pulse_index) v += config.pulse->second;
        d_cases[t] = v;
    }

    int clamped_cases = 0;
    int clamped_posts = 0;
    DailySeries cases =
        integrate(config.start_date, config.cases_level0, d_cases, "cases", clamped_cases);
    DailySeries sick =
        integrate(config.start_date, config.posts_level0, d_sick, "sick_posts", clamped_posts);
    DailySeries other = integrate(config.start_date, config.other_scale * config.posts_level0,
                                  d_other, "other_posts", clamped_posts);
    DailySeries totals(config.start_date,
                       std::vector<double>(static_cast<std::size_t>(config.days), 1e6), "totals");

    return SynthTruth{config,
                      std::move(cases),
                      std::move(sick),
                      std::move(other),
                      std::move(totals),
                      clamped_cases,
                      clamped_posts};
}

} // namespace infoveil
