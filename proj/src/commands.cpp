#include "infoveil/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "infoveil/classify.hpp"
#include "infoveil/csv.hpp"
#include "infoveil/econ.hpp"
#include "infoveil/granger.hpp"
#include "infoveil/retrieval.hpp"
#include "infoveil/series.hpp"
#include "infoveil/synth.hpp"

namespace infoveil::cli {

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') { out.push_back(cur); cur.clear(); }
        else cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

std::map<int, double> parse_kernel(const std::string& text) {
    std::map<int, double> kernel;
    if (text.empty()) return kernel;
    for (const auto& item : split_list(text)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            raise(ErrorKind::InvalidInput, "kernel entries are lag:coef, got '" + item + "'");
        try {
            const int lag = std::stoi(item.substr(0, colon));
            const double coef = std::stod(item.substr(colon + 1));
            kernel[lag] = coef;
        } catch (const std::exception&) {
            raise(ErrorKind::InvalidInput, "cannot parse kernel entry '" + item + "'");
        }
    }
    return kernel;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    for (const auto& item : split_list(text)) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            raise(ErrorKind::InvalidInput, "cannot parse number '" + item + "'");
        }
    }
    return out;
}

std::pair<Date, double> parse_pulse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        raise(ErrorKind::InvalidInput, "pulse is date:magnitude, got '" + text + "'");
    const Date d = Date::parse(text.substr(0, colon));
    try {
        return {d, std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        raise(ErrorKind::InvalidInput, "cannot parse pulse magnitude in '" + text + "'");
    }
}

RobustFlavor parse_flavor(const std::string& text) {
    if (text == "hc0") return RobustFlavor::HC0;
    if (text == "hc1") return RobustFlavor::HC1;
    if (text == "hc3") return RobustFlavor::HC3;
    raise(ErrorKind::InvalidInput, "robust flavor must be hc0, hc1 or hc3");
}

UnitRootVariant parse_variant(const std::string& text) {
    if (text == "adf") return UnitRootVariant::AdfNoTrend;
    if (text == "dfgls") return UnitRootVariant::DfGlsDemeaned;
    raise(ErrorKind::InvalidInput, "unit-root variant must be adf or dfgls");
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

std::string effects_csv(const GrangerReport& report) {
    std::string out = "lag,coef,std_coef,se,ci_lo,ci_hi,p\n";
    for (const auto& e : report.effects) {
        out += std::to_string(e.lag);
        for (double v : {e.coefficient, e.std_coefficient, e.se, e.ci_lo, e.ci_hi, e.p_value}) {
            out.push_back(',');
            out += format_value(v);
        }
        out.push_back('\n');
    }
    return out;
}

std::string summary_csv(const GrangerReport& report) {
    std::string out = "n,k,adj_r2,delta_adj_r2,aic,bic\n";
    out += std::to_string(report.fit.n);
    out.push_back(',');
    out += std::to_string(report.fit.k);
    for (double v : {report.fit.adj_r2, report.delta_adj_r2, report.fit.aic, report.fit.bic}) {
        out.push_back(',');
        out += format_value(v);
    }
    out.push_back('\n');
    return out;
}

struct SeriesOptions {
    bool fill_zero = false;
    bool predifferenced = false;
};

DiffSeries load_diff_series(const std::string& path, const std::string& label,
                            const SeriesOptions& opt) {
    const DailySeries levels = read_series_csv(path, label, opt.fill_zero);
    if (opt.predifferenced)
        return DiffSeries(levels.start_date, levels.values, label);
    return difference(levels);
}

GrangerSpec make_spec(int max_lag, const std::string& intervention, int decay,
                      const std::string& label, const std::string& robust, double ci) {
    GrangerSpec spec;
    spec.max_lag = max_lag;
    if (!intervention.empty())
        spec.intervention = InterventionSpec{Date::parse(intervention), decay};
    spec.predictor_label = label;
    spec.flavor = parse_flavor(robust);
    spec.ci_level = ci;
    return spec;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::uint64_t seed = 1;
    int days = 150;
    std::string start = "2019-11-01";
    std::string kernel = "3:2.0,6:1.5";
    std::string ar = "-0.4";
    std::string pulse;
    double noise_cases = 10.0;
    double noise_posts = 3.0;
    double base_rate = 5.0;
    double cases_level0 = 500.0;
    double posts_level0 = 100.0;
    double other_scale = 20.0;
    bool emit_posts = false;
    std::string out_dir = ".";
};

int cmd_synth(const SynthArgs& a) {
    SynthConfig config;
    config.seed = a.seed;
    config.days = a.days;
    config.start_date = Date::parse(a.start);
    config.kernel = parse_kernel(a.kernel);
    config.ar = parse_double_list(a.ar);
    if (!a.pulse.empty()) config.pulse = parse_pulse(a.pulse);
    config.noise_sd_cases = a.noise_cases;
    config.noise_sd_posts = a.noise_posts;
    config.post_base_rate = a.base_rate;
    config.cases_level0 = a.cases_level0;
    config.posts_level0 = a.posts_level0;
    config.other_scale = a.other_scale;

    const SynthTruth truth = generate(config);
    if (truth.heavy_clamping())
        std::cerr << "infoveil: warning: clamped " << truth.clamped_case_days << " case day(s) and "
                  << truth.clamped_post_days << " post day(s) at zero\n";

    write_series_csv(join_path(a.out_dir, "cases.csv"), truth.cases);
    write_series_csv(join_path(a.out_dir, "sick_posts.csv"), truth.sick_posts);
    write_series_csv(join_path(a.out_dir, "other_posts.csv"), truth.other_posts);
    write_series_csv(join_path(a.out_dir, "totals.csv"), truth.totals);

    nlohmann::json sidecar;
    sidecar["seed"] = config.seed;
    sidecar["days"] = config.days;
    sidecar["start_date"] = config.start_date.to_string();
    nlohmann::json kernel = nlohmann::json::object();
    for (const auto& [lag, coef] : config.kernel) kernel[std::to_string(lag)] = coef;
    sidecar["kernel"] = kernel;
    sidecar["ar"] = config.ar;
    if (config.pulse) {
        sidecar["pulse"] = {{"date", config.pulse->first.to_string()},
                            {"magnitude", config.pulse->second}};
    } else {
        sidecar["pulse"] = nullptr;
    }
    sidecar["noise_sd_cases"] = config.noise_sd_cases;
    sidecar["noise_sd_posts"] = config.noise_sd_posts;
    sidecar["post_base_rate"] = config.post_base_rate;
    sidecar["clamped_case_days"] = truth.clamped_case_days;
    sidecar["clamped_post_days"] = truth.clamped_post_days;
    atomic_write_file(join_path(a.out_dir, "truth.json"), sidecar.dump(2) + "\n");

    int files = 5;
    long emitted = 0;
    if (a.emit_posts) {
        std::string posts = posts_csv_header();
        for (std::size_t i = 0; i < truth.sick_posts.size(); ++i) {
            const long n = std::lround(truth.sick_posts.values[i]);
            const Date day = truth.sick_posts.date_at(i);
            for (long j = 0; j < n; ++j) {
                Post p;
                p.id = "s" + std::to_string(i) + "-" + std::to_string(j);
                p.timestamp = DateTime{day, 12 * 60};
                p.text = "synthetic sick post";
                posts += post_to_csv_row(p);
                ++emitted;
            }
        }
        atomic_write_file(join_path(a.out_dir, "posts.csv"), posts);
        ++files;
    }

    std::cout << "synth: wrote " << files << " file(s) to " << a.out_dir << " (days=" << a.days
              << " seed=" << a.seed << " clamped=" << truth.clamped_case_days << "/"
              << truth.clamped_post_days;
    if (a.emit_posts) std::cout << " posts=" << emitted;
    std::cout << ")\n";
    return 0;
}

// ---------------------------------------------------------------- retrieve

int cmd_retrieve(const std::string& corpus_path, const std::string& keywords_path,
                 const std::string& out_path, bool drop_reposts) {
    const QuerySet queries = load_query_file(keywords_path);
    std::ifstream in(corpus_path, std::ios::binary);
    if (!in) raise(ErrorKind::Io, "cannot open '" + corpus_path + "'");
    CorpusReader reader(in, corpus_path);

    const std::string tmp = out_path + ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorKind::Io, "cannot open '" + tmp + "' for writing");
    out << posts_csv_header();

    long matched = 0;
    retrieve(reader, queries, [&](const Post& p) {
        if (drop_reposts && p.is_repost) return;
        out << post_to_csv_row(p);
        ++matched;
    });
    out.close();
    std::error_code ec;
    std::filesystem::rename(tmp, out_path, ec);
    if (ec) raise(ErrorKind::Io, "rename failed: " + ec.message());

    std::cout << "retrieve: matched " << matched << " of " << reader.record_index()
              << " post(s) -> " << out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const std::string& corpus_path, const std::string& lexicon_path,
                 const std::string& out_path, const std::string& metrics_path) {
    const Lexicon lexicon = load_lexicon_file(lexicon_path);

    long counts[3] = {0, 0, 0};
    ConfusionMatrix confusion;
    bool have_truth = false;

    std::string out = "id,timestamp,region,is_repost,text,label\n";
    // Metrics mode needs a labeled corpus (six columns, last = true label).
    if (!metrics_path.empty()) {
        const auto labeled = load_labeled_posts_csv(corpus_path);
        have_truth = true;
        for (const auto& [post, truth_label] : labeled) {
            const PostLabel pred = classify_rule(post, lexicon);
            ++counts[static_cast<int>(pred)];
            confusion.add(truth_label, pred);
            std::string row = post_to_csv_row(post);
            row.insert(row.size() - 1, std::string(",") + to_string(pred));
            out += row;
        }
    } else {
        std::ifstream in(corpus_path, std::ios::binary);
        if (!in) raise(ErrorKind::Io, "cannot open '" + corpus_path + "'");
        CorpusReader reader(in, corpus_path);
        Post post;
        while (reader.next(post)) {
            const PostLabel pred = classify_rule(post, lexicon);
            ++counts[static_cast<int>(pred)];
            std::string row = post_to_csv_row(post);
            row.insert(row.size() - 1, std::string(",") + to_string(pred));
            out += row;
        }
    }
    atomic_write_file(out_path, out);

    if (have_truth) {
        const EvalMetrics m = evaluate(confusion);
        std::string metrics = "precision,recall,f1,accuracy\n";
        metrics += format_value(m.precision);
        metrics += "," + format_value(m.recall);
        metrics += "," + format_value(m.f1);
        metrics += "," + format_value(m.accuracy);
        metrics += "\n";
        atomic_write_file(metrics_path, metrics);
    }

    std::cout << "classify: ingroup=" << counts[0] << " outgroup=" << counts[1]
              << " other=" << counts[2] << " -> " << out_path;
    if (have_truth) std::cout << ", metrics -> " << metrics_path;
    std::cout << "\n";
    return 0;
}

// ---------------------------------------------------------------- aggregate

struct AggregateArgs {
    std::string corpus;
    std::string from;
    std::string to;
    std::string out;
    std::string label = "posts";
    std::string region = "all";
    std::string hubei_codes = "42";
    std::string totals;
    bool drop_reposts = false;
};

int cmd_aggregate(const AggregateArgs& a) {
    const Date from = Date::parse(a.from);
    const Date to = Date::parse(a.to);

    std::optional<DailyAggregator::RegionFilter> filter;
    if (a.region != "all") {
        std::set<std::string> hubei;
        for (const auto& code : split_list(a.hubei_codes))
            if (!code.empty()) hubei.insert(code);
        if (a.region == "tagged")
            filter = [](const std::string& r) { return !r.empty(); };
        else if (a.region == "hubei")
            filter = [hubei](const std::string& r) { return hubei.count(r) > 0; };
        else if (a.region == "other")
            filter = [hubei](const std::string& r) { return !r.empty() && hubei.count(r) == 0; };
        else
            raise(ErrorKind::InvalidInput, "region must be all, tagged, hubei or other");
    }

    std::ifstream in(a.corpus, std::ios::binary);
    if (!in) raise(ErrorKind::Io, "cannot open '" + a.corpus + "'");
    CorpusReader reader(in, a.corpus);
    DailyAggregator agg(from, to, a.label, filter);
    Post post;
    long seen = 0;
    while (reader.next(post)) {
        ++seen;
        if (a.drop_reposts && post.is_repost) continue;
        agg.add(post);
    }
    DailySeries series = agg.finish();

    if (!a.totals.empty()) {
        DailySeries totals = read_series_csv(a.totals, "totals");
        auto [lhs, rhs] = align(series, totals);
        if (lhs.size() != series.size())
            raise(ErrorKind::Alignment, "totals do not cover the aggregation range");
        series = normalize_per_million(lhs, rhs);
    }
    write_series_csv(a.out, series);

    std::cout << "aggregate: " << seen << " post(s) read, range " << a.from << ".." << a.to
              << (a.totals.empty() ? "" : ", normalized per million") << " -> " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------- unitroot

struct UnitRootArgs {
    std::string series;
    std::string column;
    bool fill_zero = false;
    int diff = 0;
    int max_lags = 29;
    std::string variant = "dfgls";
    std::string out;
};

int cmd_unitroot(const UnitRootArgs& a) {
    const UnitRootVariant variant = parse_variant(a.variant);
    std::optional<std::string> column;
    if (!a.column.empty()) column = a.column;
    DailySeries levels = read_series_csv(a.series, a.column.empty() ? "series" : a.column,
                                         a.fill_zero, column);
    std::vector<double> values = levels.values;
    if (a.diff < 0 || a.diff > 1)
        raise(ErrorKind::InvalidInput, "diff must be 0 or 1");
    if (a.diff == 1) {
        const DiffSeries d = difference(levels);
        values = d.values;
    }
    if (a.max_lags < 1) raise(ErrorKind::InvalidInput, "max-lags must be >= 1");

    std::string out = "max_lags,t,cv1,cv5,cv10\n";
    for (int k = a.max_lags; k >= 1; --k) {
        const UnitRootResult r = unit_root_test(values, k, variant);
        out += std::to_string(k);
        for (double v : {r.t_stat, r.cv1, r.cv5, r.cv10}) {
            out.push_back(',');
            out += format_value(v);
        }
        out.push_back('\n');
    }
    atomic_write_file(a.out, out);

    std::cout << "unitroot: variant=" << a.variant << " n=" << values.size()
              << " diff=" << a.diff << " lags=1.." << a.max_lags << " -> " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------- granger

struct GrangerArgs {
    std::string cases;
    std::string signal;
    int max_lag = 20;
    std::string intervention;
    int decay = 1;
    std::string signal_label = "signal";
    std::string robust = "hc1";
    double ci = 0.95;
    bool fill_zero = false;
    bool predifferenced = false;
    std::string out_effects = "effects.csv";
    std::string out_summary = "summary.csv";
    std::string compare_decays_list;
    std::string out_decays = "decays.csv";
};

int cmd_granger(const GrangerArgs& a) {
    const SeriesOptions opt{a.fill_zero, a.predifferenced};
    const DiffSeries cases = load_diff_series(a.cases, "cases", opt);
    const DiffSeries signal = load_diff_series(a.signal, a.signal_label, opt);
    const GrangerSpec spec =
        make_spec(a.max_lag, a.intervention, a.decay, a.signal_label, a.robust, a.ci);

    const GrangerReport report = fit_granger(cases, signal, spec);
    atomic_write_file(a.out_effects, effects_csv(report));
    atomic_write_file(a.out_summary, summary_csv(report));

    std::string decays_note;
    if (!a.compare_decays_list.empty()) {
        if (!spec.intervention)
            raise(ErrorKind::InvalidInput, "--compare-decays needs --intervention");
        std::vector<int> decays;
        for (const auto& item : split_list(a.compare_decays_list)) decays.push_back(std::stoi(item));
        const DecayScanResult scan = compare_decays(cases, signal, spec, decays);
        std::string out = "decay_days,adj_r2,aic,bic\n";
        for (const auto& row : scan.rows) {
            out += std::to_string(row.decay_days);
            for (double v : {row.adj_r2, row.aic, row.bic}) {
                out.push_back(',');
                out += format_value(v);
            }
            out.push_back('\n');
        }
        atomic_write_file(a.out_decays, out);
        decays_note = ", best_decay=" + std::to_string(scan.best_decay) + " -> " + a.out_decays;
    }

    std::cout << "granger: n=" << report.fit.n << " k=" << report.fit.k
              << " adj_r2=" << format_value(report.fit.adj_r2)
              << " delta_adj_r2=" << format_value(report.delta_adj_r2)
              << " block_F=" << format_value(report.predictor_block.f_stat)
              << " p=" << format_value(report.predictor_block.p_value) << " -> " << a.out_effects
              << ", " << a.out_summary << decays_note << "\n";
    return 0;
}

// ---------------------------------------------------------------- scan

struct ScanArgs {
    std::string cases;
    std::string signal;
    int min_lag = 1;
    int max_lag = 29;
    double threshold = 0.005;
    std::string intervention;
    int decay = 1;
    std::string signal_label = "signal";
    std::string robust = "hc1";
    bool fill_zero = false;
    bool predifferenced = false;
    std::string out = "scan.csv";
};

int cmd_scan(const ScanArgs& a) {
    const SeriesOptions opt{a.fill_zero, a.predifferenced};
    const DiffSeries cases = load_diff_series(a.cases, "cases", opt);
    const DiffSeries signal = load_diff_series(a.signal, a.signal_label, opt);
    const GrangerSpec spec =
        make_spec(a.max_lag, a.intervention, a.decay, a.signal_label, a.robust, 0.95);

    const LagScanResult scan = scan_lags(cases, signal, spec, a.min_lag, a.max_lag, a.threshold);
    std::string out = "m,adj_r2,delta_adj_r2,aic,bic,model_df\n";
    for (const auto& row : scan.rows) {
        out += std::to_string(row.m);
        out += "," + format_value(row.adj_r2);
        out.push_back(',');
        if (!std::isnan(row.delta_adj_r2)) out += format_value(row.delta_adj_r2);
        out += "," + format_value(row.aic);
        out += "," + format_value(row.bic);
        out += "," + std::to_string(row.model_df);
        out.push_back('\n');
    }
    atomic_write_file(a.out, out);

    std::cout << "scan: m=" << a.min_lag << ".." << a.max_lag << " recommended=" << scan.recommended
              << " (threshold " << format_value(a.threshold) << ") -> " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------- figdata

struct FigDataArgs {
    std::string cases;
    std::string sick;
    std::string other;
    std::string totals;
    int max_lag = 20;
    std::string intervention;
    int decay = 1;
    std::string robust = "hc1";
    double ci = 0.95;
    bool fill_zero = false;
    std::string out_dir = ".";
};

int cmd_figdata(const FigDataArgs& a) {
    DailySeries cases = read_series_csv(a.cases, "cases", a.fill_zero);
    DailySeries sick = read_series_csv(a.sick, "sick", a.fill_zero);
    std::optional<DailySeries> other;
    if (!a.other.empty()) other = read_series_csv(a.other, "other", a.fill_zero);
    if (!a.totals.empty()) {
        const DailySeries totals = read_series_csv(a.totals, "totals", a.fill_zero);
        {
            auto [s, t] = align(sick, totals);
            sick = normalize_per_million(s, t);
        }
        if (other) {
            auto [s, t] = align(*other, totals);
            other = normalize_per_million(s, t);
        }
    }

    Date lo = std::max(cases.start_date, sick.start_date);
    Date hi = std::min(cases.end_date(), sick.end_date());
    if (other) {
        lo = std::max(lo, other->start_date);
        hi = std::min(hi, other->end_date());
    }
    if (lo > hi) raise(ErrorKind::Alignment, "figdata: series do not overlap");

    std::string fig3 = other ? "date,cases,sick,other\n" : "date,cases,sick\n";
    for (Date d = lo; d <= hi; ++d) {
        fig3 += d.to_string();
        fig3 += "," + format_value(cases.value_on(d));
        fig3 += "," + format_value(sick.value_on(d));
        if (other) fig3 += "," + format_value(other->value_on(d));
        fig3.push_back('\n');
    }
    atomic_write_file(join_path(a.out_dir, "fig3_series.csv"), fig3);

    const GrangerSpec sick_spec =
        make_spec(a.max_lag, a.intervention, a.decay, "sick", a.robust, a.ci);
    const GrangerReport sick_report =
        fit_granger(difference(cases), difference(sick), sick_spec);
    atomic_write_file(join_path(a.out_dir, "fig4_sick.csv"), effects_csv(sick_report));

    int files = 2;
    if (other) {
        const GrangerSpec other_spec =
            make_spec(a.max_lag, a.intervention, a.decay, "other", a.robust, a.ci);
        const GrangerReport other_report =
            fit_granger(difference(cases), difference(*other), other_spec);
        atomic_write_file(join_path(a.out_dir, "fig4_other.csv"), effects_csv(other_report));
        ++files;
    }

    std::cout << "figdata: wrote " << files << " file(s) to " << a.out_dir << " (range " << lo.to_string()
              << ".." << hi.to_string() << ")\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"infoveil: epidemic signal analysis over social-media post series"};
    app.require_subcommand(1);
    app.set_config("--config");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate synthetic case and post series");
    synth->add_option("--seed", synth_args.seed, "RNG seed");
    synth->add_option("--days", synth_args.days, "number of level days");
    synth->add_option("--start", synth_args.start, "start date YYYY-MM-DD");
    synth->add_option("--kernel", synth_args.kernel, "true lag kernel, e.g. 3:2.0,6:1.5");
    synth->add_option("--ar", synth_args.ar, "AR coefficients on case differences");
    synth->add_option("--pulse", synth_args.pulse, "intervention pulse date:magnitude");
    synth->add_option("--noise-cases", synth_args.noise_cases, "case noise sd");
    synth->add_option("--noise-posts", synth_args.noise_posts, "post noise sd");
    synth->add_option("--base-rate", synth_args.base_rate, "mean daily sick-post growth");
    synth->add_option("--cases-level0", synth_args.cases_level0, "initial case level");
    synth->add_option("--posts-level0", synth_args.posts_level0, "initial post level");
    synth->add_option("--other-scale", synth_args.other_scale, "other-post volume multiple");
    synth->add_flag("--emit-posts", synth_args.emit_posts, "also write a synthetic post corpus");
    synth->add_option("--out-dir", synth_args.out_dir, "output directory");

    std::string r_corpus, r_keywords, r_out;
    bool r_dedupe = false;
    auto* retrieve_cmd = app.add_subcommand("retrieve", "Match posts against keyword queries");
    retrieve_cmd->add_option("--corpus", r_corpus, "post corpus CSV")->required();
    retrieve_cmd->add_option("--keywords", r_keywords, "keyword file, one query per line")->required();
    retrieve_cmd->add_option("--out", r_out, "matched posts CSV")->required();
    retrieve_cmd->add_flag("--dedupe", r_dedupe, "drop reposts");

    std::string c_corpus, c_lexicon, c_out, c_metrics;
    auto* classify_cmd = app.add_subcommand("classify", "Label posts with the lexicon rule");
    classify_cmd->add_option("--corpus", c_corpus, "post corpus CSV (labeled when --metrics-out)")
        ->required();
    classify_cmd->add_option("--lexicon", c_lexicon, "lexicon file")->required();
    classify_cmd->add_option("--out", c_out, "labeled posts CSV")->required();
    classify_cmd->add_option("--metrics-out", c_metrics,
                             "evaluate against the corpus label column, write metrics CSV");

    AggregateArgs agg_args;
    auto* aggregate_cmd = app.add_subcommand("aggregate", "Count posts per day");
    aggregate_cmd->add_option("--corpus", agg_args.corpus, "post corpus CSV")->required();
    aggregate_cmd->add_option("--from", agg_args.from, "range start YYYY-MM-DD")->required();
    aggregate_cmd->add_option("--to", agg_args.to, "range end YYYY-MM-DD")->required();
    aggregate_cmd->add_option("--out", agg_args.out, "output series CSV")->required();
    aggregate_cmd->add_option("--label", agg_args.label, "series label");
    aggregate_cmd->add_option("--region", agg_args.region, "all, tagged, hubei or other");
    aggregate_cmd->add_option("--hubei-codes", agg_args.hubei_codes, "region codes counted as Hubei");
    aggregate_cmd->add_option("--totals", agg_args.totals, "daily totals CSV, normalize per million");
    aggregate_cmd->add_flag("--dedupe", agg_args.drop_reposts, "drop reposts");

    UnitRootArgs ur_args;
    auto* unitroot_cmd = app.add_subcommand("unitroot", "Dickey-Fuller unit-root tests per lag");
    unitroot_cmd->add_option("--series", ur_args.series, "series CSV")->required();
    unitroot_cmd->add_option("--column", ur_args.column, "value column name for multi-column files");
    unitroot_cmd->add_flag("--fill-zero", ur_args.fill_zero, "fill missing days with zero");
    unitroot_cmd->add_option("--diff", ur_args.diff, "difference the series this many times (0 or 1)");
    unitroot_cmd->add_option("--max-lags", ur_args.max_lags, "largest lag order to test");
    unitroot_cmd->add_option("--variant", ur_args.variant, "adf or dfgls");
    unitroot_cmd->add_option("--out", ur_args.out, "output table CSV")->required();

    GrangerArgs g_args;
    auto* granger_cmd = app.add_subcommand("granger", "Lagged-difference model with intervention");
    granger_cmd->add_option("--cases", g_args.cases, "case series CSV")->required();
    granger_cmd->add_option("--signal", g_args.signal, "predictor series CSV")->required();
    granger_cmd->add_option("--max-lag", g_args.max_lag, "lag order m");
    granger_cmd->add_option("--intervention", g_args.intervention, "pulse date YYYY-MM-DD");
    granger_cmd->add_option("--decay", g_args.decay, "pulse decay in days (1 = instant)");
    granger_cmd->add_option("--signal-label", g_args.signal_label, "predictor name in outputs");
    granger_cmd->add_option("--robust", g_args.robust, "hc0, hc1 or hc3");
    granger_cmd->add_option("--ci", g_args.ci, "confidence level");
    granger_cmd->add_flag("--fill-zero", g_args.fill_zero, "fill missing days with zero");
    granger_cmd->add_flag("--predifferenced", g_args.predifferenced,
                          "inputs are already difference series");
    granger_cmd->add_option("--out-effects", g_args.out_effects, "per-lag effect CSV");
    granger_cmd->add_option("--out-summary", g_args.out_summary, "one-row summary CSV");
    granger_cmd->add_option("--compare-decays", g_args.compare_decays_list,
                            "also refit with these decay codings, e.g. 1,2,3,4,5");
    granger_cmd->add_option("--out-decays", g_args.out_decays, "decay comparison CSV");

    ScanArgs s_args;
    auto* scan_cmd = app.add_subcommand("scan", "Lag-order scan with model comparison");
    scan_cmd->add_option("--cases", s_args.cases, "case series CSV")->required();
    scan_cmd->add_option("--signal", s_args.signal, "predictor series CSV")->required();
    scan_cmd->add_option("--min-lag", s_args.min_lag, "smallest m");
    scan_cmd->add_option("--max-lag", s_args.max_lag, "largest m");
    scan_cmd->add_option("--threshold", s_args.threshold, "adjusted-R2 increment threshold");
    scan_cmd->add_option("--intervention", s_args.intervention, "pulse date YYYY-MM-DD");
    scan_cmd->add_option("--decay", s_args.decay, "pulse decay in days");
    scan_cmd->add_option("--signal-label", s_args.signal_label, "predictor name");
    scan_cmd->add_option("--robust", s_args.robust, "hc0, hc1 or hc3");
    scan_cmd->add_flag("--fill-zero", s_args.fill_zero, "fill missing days with zero");
    scan_cmd->add_flag("--predifferenced", s_args.predifferenced,
                       "inputs are already difference series");
    scan_cmd->add_option("--out", s_args.out, "scan table CSV");

    FigDataArgs f_args;
    auto* figdata_cmd = app.add_subcommand("figdata", "Emit figure-ready series and effect tables");
    figdata_cmd->add_option("--cases", f_args.cases, "case series CSV")->required();
    figdata_cmd->add_option("--sick", f_args.sick, "sick post series CSV")->required();
    figdata_cmd->add_option("--other", f_args.other, "other post series CSV");
    figdata_cmd->add_option("--totals", f_args.totals, "totals CSV for per-million normalization");
    figdata_cmd->add_option("--max-lag", f_args.max_lag, "lag order m");
    figdata_cmd->add_option("--intervention", f_args.intervention, "pulse date YYYY-MM-DD");
    figdata_cmd->add_option("--decay", f_args.decay, "pulse decay in days");
    figdata_cmd->add_option("--robust", f_args.robust, "hc0, hc1 or hc3");
    figdata_cmd->add_option("--ci", f_args.ci, "confidence level");
    figdata_cmd->add_flag("--fill-zero", f_args.fill_zero, "fill missing days with zero");
    figdata_cmd->add_option("--out-dir", f_args.out_dir, "output directory");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) return cmd_synth(synth_args);
        if (retrieve_cmd->parsed()) return cmd_retrieve(r_corpus, r_keywords, r_out, r_dedupe);
        if (classify_cmd->parsed()) return cmd_classify(c_corpus, c_lexicon, c_out, c_metrics);
        if (aggregate_cmd->parsed()) return cmd_aggregate(agg_args);
        if (unitroot_cmd->parsed()) return cmd_unitroot(ur_args);
        if (granger_cmd->parsed()) return cmd_granger(g_args);
        if (scan_cmd->parsed()) return cmd_scan(s_args);
        if (figdata_cmd->parsed()) return cmd_figdata(f_args);
    } catch (const Error& e) {
        std::cerr << "infoveil: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "infoveil: error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

} // namespace infoveil::cli
